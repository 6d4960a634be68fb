#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace lipsing::cli {

inline constexpr int kCompleted = 0;
inline constexpr int kInconclusive = 1;
inline constexpr int kInvalidInput = 2;

struct RunConfig {
    std::string command;
    std::string variety;   // variety or generator file
    std::vector<double> scales;   // empty: per-command default
    std::size_t count = 400;
    std::uint64_t seed = 0;
    Ring ring = Ring::Z2;
    int max_dim = 1;
    int dim_k = 1;
    std::string out = ".";
    std::size_t trials = 20;
};

const std::vector<std::string>& commands();

struct RunResult {
    int exit_code = kCompleted;
    std::optional<report::Json> document;   // absent on invalid input
    std::vector<std::string> files;         // written artifacts
    std::string message;
};

/// Runs one command and writes `<out>/<command>.json` plus plots.
RunResult run(const RunConfig& config);

}   // namespace lipsing::cli
