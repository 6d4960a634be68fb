#pragma once

/**
 * Sampling of rescaled links X_t = (1/t) X ∩ S, tangent cones from initial or
 * leading forms, nearest-point projection onto a link, and link complexes.
 */

#include <cstdint>
#include <optional>
#include <string>

#include "lipsing/metric_complex.hpp"
#include "lipsing/polynomial.hpp"

namespace lipsing {

struct SampleOptions {
    int newton_iterations = 50;
    double tolerance = 1e-10;   // normalized residual
    int retries = 5;            // seeds per target point
    int oversample = 4;         // targets per requested point
};

struct LinkSample {
    double t = 1.0;   // 0 or +inf tag a cone link
    Mode mode = Mode::Germ;
    PointSet points;
    double residual_bound = 0.0;
    std::uint64_t seed = 0;
    std::size_t requested = 0;
    std::size_t converged = 0;   // converged targets before thinning
};

/// Newton projection onto the link of a system at scale t.
class LinkProjector {
  public:
    LinkProjector(const PolynomialSystem& system, double t, SampleOptions options = {});

    /// Gauss-Newton with minimum-norm steps on {g = 0, |p| = 1} from `start`.
    std::optional<Point> project(const Point& start) const;

    /// A root on the great circle through `start` (real hypersurfaces only),
    /// searched within `max_angle` of start along `direction`.
    std::optional<Point> bracket(const Point& start, const Point& direction,
                                 double max_angle) const;

    /// project(), falling back to bracketing along the gradient circle for
    /// real hypersurfaces.
    std::optional<Point> nearest(const Point& start) const;

    const ScaledSystem& system() const { return scaled_; }
    bool real_hypersurface() const { return real_hypersurface_; }
    double tolerance() const { return options_.tolerance; }

  private:
    ScaledSystem scaled_;
    SampleOptions options_;
    bool real_hypersurface_;
};

/// Samples `count` points of X_t.  Deterministic per seed.  Throws
/// InsufficientConvergence when fewer than half of the requested targets
/// converge.
LinkSample sample_link(const PolynomialSystem& system, double t, std::size_t count,
                       std::uint64_t seed, Mode mode, SampleOptions options = {});

struct TangentConeModel {
    PolynomialSystem cone;
    bool heuristic = false;   // several generators: initial forms may cut out a larger set
    LinkSample link;
};

/// Lowest (germ) or highest (infinity) homogeneous part of every generator.
TangentConeModel tangent_cone(const PolynomialSystem& system, Mode mode);

/// Same, with the cone link sampled at `count` points.
TangentConeModel tangent_cone(const PolynomialSystem& system, Mode mode, std::size_t count,
                              std::uint64_t seed);

/// Symmetric Hausdorff distance.  Throws EmptyInput.
double hausdorff_distance(const PointSet& a, const PointSet& b);

/// Largest distance from a point of `points` to its nearest other point.
double sampling_gap(const PointSet& points);

/// Greedy farthest-point subsample of `count` points, starting at index 0.
/// Points closer than `min_separation` to the chosen set are never chosen.
std::vector<int> farthest_point_sample(const PointSet& points, std::size_t count,
                                       double min_separation = 1e-9);

struct LinkComplexOptions {
    int k = 12;
    int steps = 8;           // continuation steps along a candidate edge
    double tolerance = 0.1;  // allowed end-point miss, relative to edge length
    bool triangles = false;
};

/**
 * kNN complex on a link sample keeping only edges that can be followed on
 * the link: the chord is tracked by Newton continuation from one endpoint
 * and must arrive within `tolerance` * length of the other.  This rejects
 * shortcuts between nearby sheets.
 */
EmbeddedComplex link_complex(const LinkSample& sample, const LinkProjector& projector,
                             LinkComplexOptions options = {});

/// Edge test used by link_complex.
bool edge_on_link(const Point& a, const Point& b, const LinkProjector& projector, int steps,
                  double tolerance);

}   // namespace lipsing
