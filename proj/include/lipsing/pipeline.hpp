#pragma once

/**
 * Evidence for smoothness of a complex analytic germ: homology of the link
 * and of the tangent-cone link, a probe for choking cycles, multiplicity by
 * order of vanishing and by the degree of the projection onto the tangent
 * cone, and the verdict that combines them.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipsing/homology.hpp"
#include "lipsing/lne.hpp"
#include "lipsing/polynomial.hpp"
#include "lipsing/sampler.hpp"
#include "lipsing/transfer.hpp"

namespace lipsing {

struct LinkHomologyOptions {
    std::size_t landmarks = 400;
    std::vector<double> radius_factors{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};   // times the landmark gap
    std::size_t cap = kDefaultSimplexCap;
    int steps = 8;
    double tolerance = 0.1;
};

struct RadiusScan {
    double radius = 0.0;
    std::optional<BettiVector> betti;
    std::size_t simplices = 0;
    std::string error;
};

struct LinkHomology {
    BettiVector betti;   // b_0 .. b_max_dim, all exact
    double t = 0.0;      // 0 or +inf for a cone link
    double radius = 0.0;
    double gap = 0.0;
    std::size_t landmarks = 0;
    std::size_t plateau = 0;   // consecutive radii agreeing with the chosen vector
    std::vector<RadiusScan> scan;
};

/// Betti numbers of a sampled link: farthest-point landmarks, flag complexes
/// over link-tracked edges at radii proportional to the landmark gap, and the
/// longest run of radii with identical Betti numbers (smallest radius first).
LinkHomology link_homology(const LinkSample& sample, const LinkProjector& projector, int max_dim,
                           Ring ring = Ring::Z2, const LinkHomologyOptions& options = {});

LinkHomology link_homology(const PolynomialSystem& system, double t, std::size_t count,
                           std::uint64_t seed, int max_dim, Ring ring = Ring::Z2,
                           const LinkHomologyOptions& options = {});

/// Same for the sampled link of a tangent-cone model.
LinkHomology link_homology(const TangentConeModel& cone, int max_dim, Ring ring = Ring::Z2,
                           const LinkHomologyOptions& options = {});

struct ChokeRecord {
    double t = 0.0;
    Point focus;
    double focus_distance = 0.0;   // from the focus to X_t
    double patch_radius = 0.0;
    std::size_t patch_points = 0;
    bool found = false;            // a cycle non-trivial in the patch
    double support_diameter = 0.0;
    double filling_diameter = 0.0;
    bool never_fills = false;      // not a boundary anywhere in the sampled complex
    std::string note;
};

enum class ChokeVerdict { NoEvidence, Suspected };
const char* to_string(ChokeVerdict v);

struct ChokeProbe {
    int dim = 1;
    Mode mode = Mode::Germ;
    std::vector<Point> foci;
    std::vector<ChokeRecord> records;
    ChokeVerdict verdict = ChokeVerdict::NoEvidence;
    std::string reason;
};

struct ChokeOptions {
    std::size_t patch_points = 400;
    std::size_t foci = 1;
    double patch_factor = 3.0;   // patch radius in units of the focus distance
    double min_patch = 0.05;
    double floor = 0.1;          // filling diameters must stay above this
    double shrink = 4.0;         // support diameters must shrink by this factor
    std::size_t min_scales = 3;
    int k = 20;
};

/// Around foci on the singular set of the cone link, finds per scale the
/// shortest cycle (dim 1) or the smallest basis cycle (dim 2) that is not a
/// boundary in a local patch of X_t, then its filling in a complex of the
/// whole of X_t.  Choking is suspected when, over at least min_scales scales
/// approaching the point (t decreasing for germs, increasing at infinity),
/// the support diameters shrink by `shrink` while every filling stays above
/// `floor`.
ChokeProbe choking_probe(const PolynomialSystem& system, const std::vector<double>& t_list,
                         int dim, std::size_t count, std::uint64_t seed, Mode mode,
                         const ChokeOptions& options = {});

/// Order of vanishing at 0.  Throws ZeroPolynomial, InvalidArgument when
/// f(0) != 0.
int symbolic_multiplicity(const Polynomial& f);

struct MultiplicityReport {
    std::optional<int> symbolic_order;   // hypersurfaces only
    int degree = 0;                      // distinct fiber points
    std::optional<bool> agree;
    double t = 0.0;
    Point direction;                     // v0 in the cone plane (realified)
    std::vector<double> conditions;      // Jacobian condition numbers at the fiber points
    std::size_t starts = 0;
    double c_bound = 4.0;
    int redraws = 0;
    std::vector<Point> fiber;
};

struct CoveringOptions {
    double c_bound = 4.0;
    std::size_t starts = 64;
    int redraws = 8;
    double max_condition = 1e8;
    double tolerance = 1e-10;
    int newton_iterations = 60;
};

/// Real dimension of the span of a cone link sample and whether it is a
/// linear subspace of the expected dimension (complex for complex systems).
struct ConeSpan {
    int rank = 0;
    int expected = 0;
    bool linear = false;
    Eigen::MatrixXd basis;   // orthonormal columns, realified ambient
};
ConeSpan cone_span(const TangentConeModel& cone, const PolynomialSystem& system);

/// Number of points of X in the fiber of the orthogonal projection onto the
/// tangent cone over t v0, from Newton runs started inside |z| <= c_bound t.
/// Throws ConeNotLinear, FiberUnstable.
MultiplicityReport covering_degree(const PolynomialSystem& system, const TangentConeModel& cone,
                                   double t, std::uint64_t seed,
                                   const CoveringOptions& options = {});

enum class Verdict { SmoothEvidence, NonSmoothEvidence, Inconclusive };
const char* to_string(Verdict v);

struct VerdictConfig {
    std::vector<double> scales{1e-1, 1e-2, 1e-3};   // LNE profile
    std::vector<double> choke_scales{1e-1, 1e-2, 1e-3};
    std::size_t count = 400;
    std::uint64_t seed = 1;
    int dim_k = 1;   // complex dimension of X
    Ring ring = Ring::Z2;
    double link_t = 1e-2;
    double epsilon = 0.1;   // ball of the germ LNE estimate
    std::size_t trials = 20;
    bool density_check = true;
};

struct Criterion {
    std::string name;
    std::string status;   // "pass", "fail" or "error"
    std::string detail;
};

struct SmoothnessReport {
    Field field = Field::Complex;
    std::optional<LlneProfile> profile;
    std::optional<GermLneEstimate> germ_lne;
    std::optional<LinkHomology> link;
    std::vector<long long> sphere_betti;   // expected for S^{2k-1}, same range
    std::optional<LinkHomology> cone_link;
    std::vector<int> cone_dims_checked;
    std::optional<ConeLinkTransfer> transfer;
    std::optional<ChokeProbe> choke;
    std::optional<int> symbolic_order;
    std::optional<MultiplicityReport> multiplicity;
    std::vector<Criterion> criteria;
    Verdict verdict = Verdict::Inconclusive;
    bool suppressed = false;
    std::string caveat;
};

/// Runs every analysis, records per-criterion evidence and combines it:
/// suppressed for real fields; non-smooth evidence when some criterion
/// fails; smooth evidence only when all pass with d = 1 and ord = 1;
/// inconclusive when an analysis raised an error.
SmoothnessReport smoothness_verdict(const PolynomialSystem& system, const VerdictConfig& config);

struct InfinityConfig {
    std::vector<double> scales{10.0, 100.0, 1000.0};   // LLNE profile
    std::vector<double> choke_scales{100.0, 400.0, 1600.0, 6400.0};
    std::size_t count = 2000;
    std::uint64_t seed = 1;
    Ring ring = Ring::Z2;
    std::size_t trials = 20;
    bool density_check = true;
    bool choke = true;
};

struct InfinityReport {
    std::optional<LlneProfile> profile;
    std::optional<LinkHomology> link;        // X_t at the largest profile scale
    std::optional<LinkHomology> cone_link;   // link of the cone at infinity
    std::optional<ConeLinkTransfer> transfer;
    // rank H_1(cone link) > rank H_1(link): no epimorphism, so not LLNE at infinity.
    bool obstruction = false;
    std::string obstruction_note;
    std::optional<ChokeProbe> choke;
    std::vector<Criterion> criteria;
};

/// Behaviour at infinity: LLNE profile over growing scales, H_1 of the
/// link and of the cone link with the Z/2 surjectivity obstruction, the
/// transfer certificate and the choking probe.
InfinityReport infinity_analysis(const PolynomialSystem& system, const InfinityConfig& config);

/// Betti numbers b_0..b_max_dim of the sphere of the given dimension.
std::vector<long long> sphere_betti(int sphere_dim, int max_dim);

}   // namespace lipsing
