#pragma once

/**
 * Loop transfer between Hausdorff-close normally embedded complexes: the
 * homology systole, the broken-geodesic transfer of a loop from X1 to X0,
 * and certificates that check the closeness hypothesis and the stability of
 * the transferred classes under random choices.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipsing/homology.hpp"
#include "lipsing/metric_complex.hpp"
#include "lipsing/polynomial.hpp"
#include "lipsing/sampler.hpp"

namespace lipsing {

struct SystoleEstimate {
    double epsilon0 = kInfinity;   // +inf when H_1(.; Z/2) = 0
    LoopPath witness;              // empty when epsilon0 is infinite
    std::string method = "homology-proxy";
    std::size_t candidates = 0;    // cycles examined

    bool infinite() const { return !std::isfinite(epsilon0); }
};

/// Shortest loop that is not a boundary over Z/2, among the cycles made of
/// two shortest-path-tree branches and one non-tree edge (this family
/// contains a shortest non-trivial cycle).
SystoleEstimate epsilon0_estimate(const EmbeddedComplex& complex);

/// Shortest-first loops at `basepoint` whose Z/2 classes form a basis of
/// H_1(.; Z/2).
std::vector<LoopPath> homology_generators(const EmbeddedComplex& complex, int basepoint);

struct TransferOptions {
    bool randomized = false;   // random nearby vertex and random partition
    std::uint64_t seed = 0;
    std::optional<int> target_basepoint;   // y0, the image of the loop's basepoint
};

struct TransferredLoop {
    LoopPath loop;                       // in X0
    std::vector<Point> breakpoints;      // x_i on the input loop
    std::vector<int> targets;            // y_i in X0
    std::vector<double> segment_lengths; // geodesic y_i -> y_{i+1}
    double max_arc = 0.0;                // longest partition arc of the input
};

/**
 * Partitions the loop into arcs shorter than 3 C eps (virtual vertices are
 * inserted on long edges), sends every breakpoint to an X0 vertex within eps
 * and joins consecutive targets by shortest paths.  Throws NoNearbyPoint.
 */
TransferredLoop transfer_loop(const LoopPath& loop, const EmbeddedComplex& x1,
                              const EmbeddedComplex& x0, double C, double eps,
                              const TransferOptions& options = {});

struct Hypothesis {
    double dist_h = 0.0;
    double C0 = 1.0;
    double C1 = 1.0;
    double C = 1.0;   // max(C0, C1)
    double epsilon0_x0 = kInfinity;
    double epsilon0_x1 = kInfinity;
    double bound = kInfinity;       // epsilon0(X0) / (20 C^2)
    double iso_bound = kInfinity;   // min(epsilon0(X0), epsilon0(X1)) / (20 C^2)
    std::optional<double> epsilon0_override;
    double eps = 0.0;               // nearness radius used by the transfer
    bool eps_admissible = false;    // eps < bound, so the proof's choices apply
    bool passed = false;
    bool isomorphism = false;
};

struct LoopClass {
    H1Annotation::Class z2;
    std::optional<IntegerH1::Class> z;   // absent when the Z presentation is too large
};

struct TransferCertificate {
    Hypothesis hypothesis;
    LoopPath input;
    std::optional<LoopPath> output;
    std::optional<LoopClass> output_class;
    LoopClass input_class;
    std::size_t trials = 0;
    std::size_t trials_agreeing = 0;
    bool stable = false;
    double max_segment = 0.0;
    double segment_bound = 0.0;   // 5 C^2 eps
    std::string direction;        // "epimorphism-only" or "isomorphism"
    std::string refusal;          // set instead of a class when no class is asserted
    std::string caveat = "pi_1 statements are checked on H_1 (Z/2 and Z)";
};

struct HomomorphismCheck {
    std::size_t pairs = 0;
    std::size_t holding = 0;
    bool holds() const { return holding == pairs; }
};

struct TransferRun {
    Hypothesis hypothesis;
    int x0_basepoint = -1;   // in X1
    int y0_basepoint = -1;   // in X0
    std::vector<TransferCertificate> certificates;
    HomomorphismCheck homomorphism;
    int rank_x0 = 0;   // dim H_1(.; Z/2)
    int rank_x1 = 0;
};

struct CertificateOptions {
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::optional<double> epsilon0_override;
    bool check_homomorphism = true;
};

/// Checks dist_H(X1, X0) < epsilon0(X0) / (20 C^2) and, when it holds,
/// transfers every loop deterministically and in `trials` randomized runs.
/// Loops not based at the chosen x0 are conjugated by a shortest path.
/// A failed hypothesis yields certificates carrying a HypothesisViolated
/// refusal and no class.
TransferRun transfer_certificate(const EmbeddedComplex& x0, const EmbeddedComplex& x1,
                                 const std::vector<LoopPath>& loops,
                                 const CertificateOptions& options = {});

struct ConeLinkTransfer {
    Mode mode = Mode::Germ;
    double t = 0.0;
    std::size_t link_points = 0;
    std::size_t cone_points = 0;
    bool heuristic_cone = false;
    TransferRun run;
    // Z/2 surjectivity obstruction: rank H_1(cone link) > rank H_1(link).
    bool obstruction = false;
    std::string obstruction_note;
};

struct ConeLinkOptions {
    CertificateOptions certificate;
    LinkComplexOptions complex{.k = 12, .steps = 8, .tolerance = 0.1, .triangles = true};
};

/// Builds the complexes of X_t and of the tangent-cone link (leading forms
/// at infinity) and certifies the transfer of H_1 generators of X_t.
ConeLinkTransfer cone_link_transfer(const PolynomialSystem& system, double t, std::size_t count,
                                    std::uint64_t seed, Mode mode,
                                    const ConeLinkOptions& options = {});

}   // namespace lipsing
