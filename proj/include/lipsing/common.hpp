#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace lipsing {

using Point = Eigen::VectorXd;
using PointSet = std::vector<Point>;

// Metric comparisons at unit scale.
inline constexpr double kMetricTol = 1e-9;
// Two vertices closer than this are the same vertex.
inline constexpr double kDuplicateTol = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Field { Real, Complex };
enum class Mode { Germ, Infinity };

const char* to_string(Field field);
const char* to_string(Mode mode);

/// SplitMix64 finalizer; used to derive independent per-item streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic RNG stream for item `index` of a run seeded with `seed`.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index)
{
    return std::mt19937_64(mix_seed(seed, index));
}

/// Uniform random unit vector in R^dim.
Point random_unit_vector(std::mt19937_64& rng, int dim);

/// Largest pairwise Euclidean distance among the given points.
double point_set_diameter(const PointSet& points);

}   // namespace lipsing
