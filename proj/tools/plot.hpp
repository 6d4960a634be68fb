#pragma once

// Standalone SVG plots: log-log curves and Betti tables.

#include <string>
#include <vector>

namespace lipsing::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Log-log line plot.  Non-positive values are skipped.
std::string loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                   const std::vector<Series>& series);

/// Table with a header row; cells are plain text.
std::string table(const std::string& title, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows);

}   // namespace lipsing::plot
