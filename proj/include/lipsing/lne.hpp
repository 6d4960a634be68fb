#pragma once

/**
 * Lipschitz normal embedding constants of sampled sets: the exact all-pairs
 * ratio of inner to outer distance on a complex, profiles of that ratio over
 * the rescaled links X_t, and a multi-scale estimate on X near a point.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "lipsing/metric_complex.hpp"
#include "lipsing/polynomial.hpp"
#include "lipsing/sampler.hpp"

namespace lipsing {

enum class OuterMetric {
    Euclidean,
    Spherical,   // great-circle angle; inner edges weighted by their arcs
};

struct LneReport {
    double C = 1.0;
    int witness_a = -1;
    int witness_b = -1;
    Point point_a;
    Point point_b;
    double inner = 0.0;   // witness distances in the chosen metric
    double outer = 0.0;
    OuterMetric metric = OuterMetric::Euclidean;
    std::size_t pairs = 0;
    // Quantiles of the per-pair ratio.
    double ratio_median = 1.0;
    double ratio_p90 = 1.0;
    double ratio_p99 = 1.0;
};

/// Max over vertex pairs of d_inner / d_outer.  Throws DisconnectedComplex.
LneReport lne_constant(const EmbeddedComplex& complex,
                       OuterMetric metric = OuterMetric::Euclidean);

enum class Divergence { Bounded, Violating };
const char* to_string(Divergence d);

struct ProfileEntry {
    double t = 0.0;
    LneReport report;
    std::size_t points = 0;
    std::size_t edges = 0;
    double doubled_C = 0.0;   // 0 when the density check was skipped
    bool low_confidence = false;
};

struct LlneProfile {
    Mode mode = Mode::Germ;
    std::vector<ProfileEntry> entries;
    double slope = 0.0;       // least squares of log C against log t
    double intercept = 0.0;
    double residual = 0.0;    // RMS of the fit in log space
    Divergence divergence = Divergence::Bounded;
    bool low_confidence = false;
};

struct ProfileOptions {
    bool density_check = true;
    LinkComplexOptions complex;
    SampleOptions sampling;
};

// Fitted-slope threshold and residual ceiling of the divergence rule.
inline constexpr double kViolatingSlope = 0.15;
inline constexpr double kViolatingResidual = 0.2;
// Relative disagreement allowed between C and C at twice the density.
inline constexpr double kDensityAgreement = 0.10;

/// Per scale: sample_link, link_complex, lne_constant with the spherical
/// metric.  Germ profiles diverge as t decreases and infinity profiles as t
/// grows; the slope threshold is applied with that orientation.
LlneProfile llne_profile(const PolynomialSystem& system, const std::vector<double>& t_list,
                         std::size_t count, std::uint64_t seed, Mode mode,
                         ProfileOptions options = {});

/// Least-squares line through (log t, log C); fills slope, intercept,
/// residual and the divergence class.
void fit_profile(LlneProfile& profile);

struct GermEstimateOptions {
    int scales = 7;   // log-spaced radii from epsilon down to epsilon / 1000
    int k = 24;
    int steps = 8;
    double tolerance = 0.1;
    SampleOptions sampling;
};

struct GermLneEstimate {
    LneReport report;
    std::vector<double> radii;
    std::size_t points = 0;
    std::size_t edges = 0;
};

/// Samples X at log-spaced radii inside the ball of radius epsilon, joins the
/// layers and the origin in one complex whose edges are tracked on X (kNN plus
/// nearest neighbors in the next layer inwards), and takes its Euclidean LNE
/// constant.
GermLneEstimate germ_lne_estimate(const PolynomialSystem& system, double epsilon,
                                  std::size_t count, std::uint64_t seed,
                                  GermEstimateOptions options = {});

/// Newton projection of x onto X (no sphere constraint), carried out in
/// coordinates rescaled by |x|.
std::optional<Point> project_to_variety(const PolynomialSystem& system, const Point& x,
                                        SampleOptions options = {});

}   // namespace lipsing
