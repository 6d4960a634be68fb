#include "lipsing/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lipsing/errors.hpp"
#include "lipsing/parallel.hpp"

namespace lipsing {

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

std::string fmt_betti(const std::vector<long long>& b)
{
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i)
        s += (i ? "," : "") + std::to_string(b[i]);
    return s + ")";
}

bool same_betti(const BettiVector& a, const BettiVector& b)
{
    return a.betti == b.betti && a.torsion == b.torsion;
}

// Radical of a monomial: every variable that occurs, to the first power.
Polynomial radical_if_monomial(const Polynomial& p)
{
    if (p.num_terms() != 1)
        return p;
    const auto& [e, c] = *p.terms().begin();
    Exponent r(e.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i)
        r[i] = e[i] > 0 ? 1 : 0;
    Polynomial out(p.num_vars());
    out.add_term(r, Rational(1));
    return out;
}

std::vector<std::size_t> xor_chain(std::vector<std::size_t> chain)
{
    std::sort(chain.begin(), chain.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < chain.size();) {
        std::size_t j = i;
        while (j < chain.size() && chain[j] == chain[i])
            ++j;
        if ((j - i) % 2)
            out.push_back(chain[i]);
        i = j;
    }
    return out;
}

// Nearest-point projection of f, or the closest projection of nearby starts
// when Newton from f itself stalls (f often sits where X_t degenerates).
std::optional<Point> closest_on_link(const LinkProjector& projector, const Point& f,
                                     std::uint64_t seed)
{
    if (auto q = projector.nearest(f))
        return q;
    constexpr std::size_t kStarts = 64;
    std::vector<std::optional<Point>> found(kStarts);
    parallel_for(kStarts, [&](std::size_t i) {
        std::mt19937_64 rng = stream_rng(seed, i);
        const double r = 0.02 * std::pow(2.0, static_cast<double>(i % 5));
        found[i] = projector.project(f + r * random_unit_vector(rng, static_cast<int>(f.size())));
    });
    std::optional<Point> best;
    for (auto& p : found)
        if (p && (!best || (*p - f).norm() < (*best - f).norm()))
            best = p;
    return best;
}

}   // namespace

LinkHomology link_homology(const LinkSample& sample, const LinkProjector& projector, int max_dim,
                           Ring ring, const LinkHomologyOptions& options)
{
    if (max_dim < 0)
        throw InvalidArgument("max_dim must be non-negative");
    if (sample.points.empty())
        throw EmptyInput("link sample is empty");
    if (options.radius_factors.empty())
        throw InvalidArgument("no radii to scan");

    LinkHomology out;
    out.t = sample.t;
    PointSet L;
    for (int i : farthest_point_sample(sample.points, options.landmarks))
        L.push_back(sample.points[i]);
    out.landmarks = L.size();
    out.gap = sampling_gap(L);

    const double rmax =
        out.gap * *std::max_element(options.radius_factors.begin(), options.radius_factors.end());
    struct Pair {
        int a, b;
        double d;
    };
    std::vector<std::vector<Pair>> near(L.size());
    parallel_for(L.size(), [&](std::size_t i) {
        for (std::size_t j = i + 1; j < L.size(); ++j) {
            const double d = (L[i] - L[j]).norm();
            if (d <= rmax && edge_on_link(L[i], L[j], projector, options.steps, options.tolerance))
                near[i].push_back({static_cast<int>(i), static_cast<int>(j), d});
        }
    });

    for (double f : options.radius_factors) {
        RadiusScan scan;
        scan.radius = f * out.gap;
        std::vector<std::pair<int, int>> edges;
        for (const auto& row : near)
            for (const Pair& p : row)
                if (p.d <= scan.radius)
                    edges.emplace_back(p.a, p.b);
        try {
            const RipsComplex rips = flag_complex(L, edges, max_dim + 1, options.cap);
            scan.simplices = rips.chain.total_size();
            BettiVector b = betti(rips.chain, ring);
            b.betti.resize(max_dim + 1, 0);
            if (!b.torsion.empty())
                b.torsion.resize(max_dim + 1);
            scan.betti = std::move(b);
        } catch (const SizeBudgetExceeded& e) {
            scan.error = e.what();
            out.scan.push_back(std::move(scan));
            break;
        }
        out.scan.push_back(std::move(scan));
    }

    std::size_t best_len = 0, best_start = 0;
    for (std::size_t i = 0; i < out.scan.size();) {
        if (!out.scan[i].betti) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < out.scan.size() && out.scan[j].betti &&
               same_betti(*out.scan[j].betti, *out.scan[i].betti))
            ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_start = i;
        }
        i = j;
    }
    if (best_len == 0)
        throw SizeBudgetExceeded("no radius fits the simplex budget: " + out.scan.front().error);
    out.betti = *out.scan[best_start].betti;
    out.radius = out.scan[best_start].radius;
    out.plateau = best_len;
    return out;
}

LinkHomology link_homology(const PolynomialSystem& system, double t, std::size_t count,
                           std::uint64_t seed, int max_dim, Ring ring,
                           const LinkHomologyOptions& options)
{
    const LinkSample sample = sample_link(system, t, count, seed, system.mode);
    const LinkProjector projector(system, t);
    return link_homology(sample, projector, max_dim, ring, options);
}

LinkHomology link_homology(const TangentConeModel& cone, int max_dim, Ring ring,
                           const LinkHomologyOptions& options)
{
    const LinkProjector projector(cone.cone, 1.0);
    return link_homology(cone.link, projector, max_dim, ring, options);
}

const char* to_string(ChokeVerdict v)
{
    return v == ChokeVerdict::Suspected ? "choking-suspected" : "no-choking-evidence";
}

ChokeProbe choking_probe(const PolynomialSystem& system, const std::vector<double>& t_list,
                         int dim, std::size_t count, std::uint64_t seed, Mode mode,
                         const ChokeOptions& options)
{
    if (dim != 1 && dim != 2)
        throw InvalidArgument("choking probe supports dimensions 1 and 2");
    if (t_list.empty())
        throw InvalidArgument("choking probe needs at least one scale");
    for (double t : t_list)
        if (!(t > 0.0) || !std::isfinite(t))
            throw InvalidArgument("scales must be positive and finite");
    system.validate();

    ChokeProbe probe;
    probe.dim = dim;
    probe.mode = mode;

    // Foci: the singular set of the cone link.
    const TangentConeModel cone = tangent_cone(system, mode);
    if (cone.cone.polynomials.size() != 1) {
        probe.reason = "singular set of the cone is computed for hypersurfaces only";
        return probe;
    }
    const Polynomial& g = cone.cone.polynomials.front();
    PolynomialSystem singular = cone.cone;
    singular.name = system.name + " cone singular set";
    singular.polynomials.clear();
    for (std::size_t v = 0; v < g.num_vars(); ++v) {
        const Polynomial d = g.derivative(v);
        if (d.is_zero())
            continue;
        if (d.is_constant()) {
            probe.reason = "cone link is smooth (no foci)";
            return probe;
        }
        singular.polynomials.push_back(radical_if_monomial(d));
    }
    try {
        const LinkSample foci = sample_link(singular, 1.0, options.foci, mix_seed(seed, 101), Mode::Germ);
        probe.foci = foci.points;
    } catch (const InsufficientConvergence&) {
        probe.reason = "cone link is smooth (no foci)";
        return probe;
    }

    for (std::size_t fi = 0; fi < probe.foci.size(); ++fi) {
        const Point& f = probe.foci[fi];
        for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
            const double t = t_list[ti];
            ChokeRecord rec;
            rec.t = t;
            rec.focus = f;
            const LinkProjector projector(system, t);
            const auto q = closest_on_link(projector, f, mix_seed(seed, 500 + ti));
            if (!q) {
                rec.note = "no point of X_t found near the focus";
                probe.records.push_back(std::move(rec));
                continue;
            }
            rec.focus_distance = (*q - f).norm();
            const double rho = std::max(options.patch_factor * rec.focus_distance, options.min_patch);
            rec.patch_radius = rho;

            // Local patch of X_t around the focus.
            const std::uint64_t patch_seed = mix_seed(seed, 1000 + fi * t_list.size() + ti);
            const std::size_t targets = 4 * options.patch_points;
            std::vector<std::optional<Point>> found(targets);
            const int D = static_cast<int>(f.size());
            parallel_for(targets, [&](std::size_t i) {
                std::mt19937_64 rng = stream_rng(patch_seed, i);
                std::uniform_real_distribution<double> unit(0.0, 1.0);
                const Point start = *q + rho * std::pow(unit(rng), 1.0 / D) * random_unit_vector(rng, D);
                if (auto p = projector.project(start))
                    if ((*p - f).norm() <= rho)
                        found[i] = p;
            });
            PointSet pool{*q};
            for (auto& p : found)
                if (p)
                    pool.push_back(*p);
            PointSet patch;
            for (int i : farthest_point_sample(pool, options.patch_points, 1e-6 * rho))
                patch.push_back(pool[i]);
            rec.patch_points = patch.size();
            if (patch.size() < 20) {
                rec.note = "patch too sparse";
                probe.records.push_back(std::move(rec));
                continue;
            }

            // Whole-link complex: the patch plus a global sample.
            PointSet U = patch;
            const LinkSample global = sample_link(system, t, count, mix_seed(seed, 2000 + ti), mode);
            for (const Point& p : global.points) {
                bool dup = false;
                for (const Point& r : patch)
                    if ((p - r).norm() < 1e-6 * rho) {
                        dup = true;
                        break;
                    }
                if (!dup)
                    U.push_back(p);
            }
            const EmbeddedComplex knn = knn_complex(U, options.k, false, [&](int a, int b) {
                return edge_on_link(U[a], U[b], projector, 8, 0.1);
            });
            std::vector<std::pair<int, int>> edges;
            for (const Edge& e : knn.edges())
                edges.emplace_back(e.a, e.b);
            const ChainComplex whole = clique_complex(U.size(), edges, dim + 1);

            // Patch sub-complex: vertices of U within rho of the focus.
            std::vector<int> local_of(U.size(), -1), global_of;
            for (std::size_t v = 0; v < U.size(); ++v)
                if ((U[v] - f).norm() <= rho) {
                    local_of[v] = static_cast<int>(global_of.size());
                    global_of.push_back(static_cast<int>(v));
                }
            std::vector<std::pair<int, int>> local_edges;
            PointSet local_points;
            for (int v : global_of)
                local_points.push_back(U[v]);
            for (auto [a, b] : edges)
                if (local_of[a] >= 0 && local_of[b] >= 0)
                    local_edges.emplace_back(local_of[a], local_of[b]);

            std::optional<CycleClass> cycle;
            if (dim == 1) {
                const EmbeddedComplex local(local_points, local_edges,
                                            flag_triangles(local_points.size(), local_edges));
                const SystoleEstimate sys = epsilon0_estimate(local);
                if (!sys.infinite()) {
                    std::vector<std::size_t> chain;
                    for (std::size_t i = 0; i + 1 < sys.witness.vertices.size(); ++i) {
                        int a = global_of[sys.witness.vertices[i]];
                        int b = global_of[sys.witness.vertices[i + 1]];
                        if (a > b)
                            std::swap(a, b);
                        chain.push_back(*whole.index_of({a, b}));
                    }
                    cycle = make_cycle(whole, U, 1, xor_chain(std::move(chain)));
                }
            } else {
                const ChainComplex local = clique_complex(local_points.size(), local_edges, 3);
                std::vector<CycleClass> basis = homology_basis(local, local_points, 2);
                if (!basis.empty()) {
                    const auto it = std::min_element(
                        basis.begin(), basis.end(), [](const CycleClass& a, const CycleClass& b) {
                            return a.support_diameter < b.support_diameter;
                        });
                    std::vector<std::size_t> chain;
                    for (std::size_t s : it->chain) {
                        Simplex sx = local.simplex(2, s);
                        for (int& v : sx)
                            v = global_of[v];
                        std::sort(sx.begin(), sx.end());
                        chain.push_back(*whole.index_of(sx));
                    }
                    cycle = make_cycle(whole, U, 2, std::move(chain));
                }
            }
            if (!cycle || cycle->chain.empty()) {
                rec.note = "patch has no non-trivial cycle";
                probe.records.push_back(std::move(rec));
                continue;
            }
            rec.found = true;
            rec.support_diameter = cycle->support_diameter;
            try {
                rec.filling_diameter = filling(*cycle, whole, U).diameter;
            } catch (const NeverFills&) {
                rec.never_fills = true;
                rec.note = "cycle is not a boundary in the sampled complex";
            }
            probe.records.push_back(std::move(rec));
        }
    }

    // Verdict per focus, scales ordered towards the point.
    for (const Point& f : probe.foci) {
        std::vector<const ChokeRecord*> seq;
        for (const ChokeRecord& r : probe.records)
            if (r.found && r.focus == f)
                seq.push_back(&r);
        std::stable_sort(seq.begin(), seq.end(), [&](const ChokeRecord* a, const ChokeRecord* b) {
            return mode == Mode::Germ ? a->t > b->t : a->t < b->t;
        });
        if (seq.size() < options.min_scales)
            continue;
        bool ok = true;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (!seq[i]->never_fills && seq[i]->filling_diameter < options.floor)
                ok = false;
            if (i > 0 && seq[i]->support_diameter > 1.05 * seq[i - 1]->support_diameter)
                ok = false;
        }
        const double shrink = seq.front()->support_diameter / seq.back()->support_diameter;
        if (ok && shrink >= options.shrink) {
            probe.verdict = ChokeVerdict::Suspected;
            probe.reason = "support diameters shrink " + fmt(shrink) + "x over " +
                           std::to_string(seq.size()) + " scales while fillings stay above " +
                           fmt(options.floor);
        }
    }
    if (probe.verdict == ChokeVerdict::NoEvidence && probe.reason.empty())
        probe.reason = "no family of shrinking cycles with fillings above " + fmt(options.floor);
    return probe;
}

int symbolic_multiplicity(const Polynomial& f)
{
    if (f.is_zero())
        throw ZeroPolynomial("multiplicity of the zero polynomial");
    if (f.constant_term() != 0)
        throw InvalidArgument("f(0) != 0: the point is not on the hypersurface");
    return f.order();
}

ConeSpan cone_span(const TangentConeModel& cone, const PolynomialSystem& system)
{
    if (cone.link.points.empty())
        throw InvalidArgument("cone model has no sampled link");
    const int N = system.real_dim();
    Eigen::MatrixXd M(static_cast<Eigen::Index>(cone.link.points.size()), N);
    for (std::size_t i = 0; i < cone.link.points.size(); ++i)
        M.row(static_cast<Eigen::Index>(i)) = cone.link.points[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    ConeSpan out;
    out.expected = N - system.real_equations();
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > 1e-6 * s[0])
            ++out.rank;
    out.basis = svd.matrixV().leftCols(out.rank);
    out.linear = out.rank == out.expected;
    if (out.linear && system.field == Field::Complex) {
        // The span must be a complex subspace: closed under multiplication by i.
        for (int c = 0; c < out.rank && out.linear; ++c) {
            Eigen::VectorXd b = out.basis.col(c), ib(N);
            for (int j = 0; j < N / 2; ++j) {
                ib[2 * j] = -b[2 * j + 1];
                ib[2 * j + 1] = b[2 * j];
            }
            const Eigen::VectorXd rest = ib - out.basis * (out.basis.transpose() * ib);
            if (rest.norm() > 1e-6)
                out.linear = false;
        }
    }
    return out;
}

MultiplicityReport covering_degree(const PolynomialSystem& system, const TangentConeModel& cone,
                                   double t, std::uint64_t seed, const CoveringOptions& options)
{
    if (!(t > 0.0))
        throw InvalidArgument("scale must be positive");
    system.validate();
    const ConeSpan span = cone_span(cone, system);
    if (!span.linear)
        throw ConeNotLinear("tangent cone spans real dimension " + std::to_string(span.rank) +
                            ", expected a linear subspace of dimension " +
                            std::to_string(span.expected));
    const int N = system.real_dim();
    const int k2 = span.rank;
    Eigen::JacobiSVD<Eigen::MatrixXd> full(span.basis * span.basis.transpose(), Eigen::ComputeFullU);
    const Eigen::MatrixXd normal = full.matrixU().rightCols(N - k2);
    const ScaledSystem scaled(system, t);

    MultiplicityReport rep;
    if (system.polynomials.size() == 1)
        rep.symbolic_order = symbolic_multiplicity(system.polynomials.front());
    rep.t = t;
    rep.c_bound = options.c_bound;
    rep.starts = options.starts;
    std::mt19937_64 rng(mix_seed(seed, 0));
    int redraws = 0;
    for (int round = 0;; ++round) {
        const Point v0 = span.basis * random_unit_vector(rng, k2);
        const double wmax = std::sqrt(std::max(0.0, rep.c_bound * rep.c_bound - 1.0));
        struct Solution {
            Point p;
            double condition;
        };
        std::vector<std::optional<Solution>> sols(options.starts);
        const std::uint64_t round_seed = mix_seed(seed, 1 + round);
        parallel_for(options.starts, [&](std::size_t i) {
            std::mt19937_64 r = stream_rng(round_seed, i);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            Eigen::VectorXd w = wmax * std::pow(unit(r), 1.0 / (N - k2)) * random_unit_vector(r, N - k2);
            Eigen::VectorXd values;
            Eigen::MatrixXd jac;
            bool converged = false;
            for (int it = 0; it < options.newton_iterations; ++it) {
                const Point p = v0 + normal * w;
                scaled.evaluate(p, values, jac);
                if (!values.allFinite() || !jac.allFinite())
                    return;
                const Eigen::MatrixXd J = jac * normal;
                Eigen::VectorXd step = -J.completeOrthogonalDecomposition().solve(values);
                if (!step.allFinite())
                    return;
                const double len = step.norm();
                if (len > 0.5 * rep.c_bound)
                    step *= 0.5 * rep.c_bound / len;
                w += step;
                if (len <= 1e-13 * (1.0 + w.norm())) {
                    converged = true;
                    break;
                }
            }
            const Point p = v0 + normal * w;
            if (scaled.residual(p) > options.tolerance * 1e-2 && !converged)
                return;
            if (scaled.residual(p) > options.tolerance || p.norm() > rep.c_bound)
                return;
            scaled.evaluate(p, values, jac);
            Eigen::JacobiSVD<Eigen::MatrixXd> js(jac * normal);
            const auto& sv = js.singularValues();
            const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : kInfinity;
            sols[i] = Solution{p, cond};
        });

        std::vector<Solution> distinct;
        for (auto& s : sols) {
            if (!s)
                continue;
            bool seen = false;
            for (const Solution& d : distinct)
                if ((d.p - s->p).norm() < 10.0 * options.tolerance) {
                    seen = true;
                    break;
                }
            if (!seen)
                distinct.push_back(*s);
        }
        std::stable_sort(distinct.begin(), distinct.end(), [](const Solution& a, const Solution& b) {
            for (Eigen::Index i = 0; i < a.p.size(); ++i)
                if (a.p[i] != b.p[i])
                    return a.p[i] < b.p[i];
            return false;
        });
        bool stable = !distinct.empty();
        for (const Solution& s : distinct)
            if (!(s.condition <= options.max_condition))
                stable = false;
        if (stable) {
            rep.degree = static_cast<int>(distinct.size());
            rep.direction = v0;
            rep.redraws = redraws;
            for (const Solution& s : distinct) {
                rep.conditions.push_back(s.condition);
                rep.fiber.push_back(t * s.p);
            }
            break;
        }
        ++redraws;
        if (redraws >= options.redraws) {
            if (rep.c_bound > options.c_bound)
                throw FiberUnstable("fiber Newton runs stayed ill-conditioned after " +
                                    std::to_string(redraws) + " directions");
            rep.c_bound *= 2.0;
            redraws = 0;
        }
    }
    if (rep.symbolic_order)
        rep.agree = *rep.symbolic_order == rep.degree;
    return rep;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::SmoothEvidence:
        return "smooth-evidence";
    case Verdict::NonSmoothEvidence:
        return "non-smooth-evidence";
    default:
        return "inconclusive";
    }
}

std::vector<long long> sphere_betti(int sphere_dim, int max_dim)
{
    std::vector<long long> b(max_dim + 1, 0);
    if (sphere_dim == 0) {
        b[0] = 2;
        return b;
    }
    b[0] = 1;
    if (sphere_dim <= max_dim)
        b[sphere_dim] += 1;
    return b;
}

SmoothnessReport smoothness_verdict(const PolynomialSystem& system, const VerdictConfig& config)
{
    if (system.mode != Mode::Germ)
        throw InvalidArgument("smoothness verdict needs a germ-mode system");
    system.validate();
    if (config.dim_k < 1)
        throw InvalidArgument("dimension k must be at least 1");

    SmoothnessReport rep;
    rep.field = system.field;
    const bool complex = system.field == Field::Complex;
    // Link of a smooth germ: S^{2k-1} over C, S^{k-1} over R.
    const int sphere = complex ? 2 * config.dim_k - 1 : config.dim_k - 1;
    auto add = [&](std::string name, std::string status, std::string detail) {
        rep.criteria.push_back({std::move(name), std::move(status), std::move(detail)});
    };
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            add(name, "error", std::string(e.kind()) + ": " + e.what());
        }
    };

    guarded("lne", [&] {
        ProfileOptions popt;
        popt.density_check = config.density_check;
        rep.profile = llne_profile(system, config.scales, config.count, mix_seed(config.seed, 1),
                                   Mode::Germ, popt);
        rep.germ_lne = germ_lne_estimate(system, config.epsilon, config.count,
                                         mix_seed(config.seed, 2));
        const bool bounded = rep.profile->divergence == Divergence::Bounded;
        add("lne", bounded ? "pass" : "fail",
            std::string("profile ") + to_string(rep.profile->divergence) + ", slope " +
                fmt(rep.profile->slope) + ", residual " + fmt(rep.profile->residual) +
                "; germ estimate C = " + fmt(rep.germ_lne->report.C) +
                (rep.profile->low_confidence ? "; low confidence" : ""));
    });

    guarded("link-h1", [&] {
        rep.link = link_homology(system, config.link_t, config.count, mix_seed(config.seed, 3), 1,
                                 config.ring);
        rep.sphere_betti = sphere_betti(sphere, 1);
        const bool ok = rep.link->betti.betti == rep.sphere_betti;
        add("link-h1", ok ? "pass" : "fail",
            "link Betti " + fmt_betti(rep.link->betti.betti) + " vs S^" + std::to_string(sphere) +
                " " + fmt_betti(rep.sphere_betti));
    });

    guarded("cone-link-homology", [&] {
        const TangentConeModel cone =
            tangent_cone(system, Mode::Germ, config.count, mix_seed(config.seed, 4));
        const int top = std::clamp(complex ? 2 * config.dim_k - 2 : config.dim_k - 2, 1, 2);
        rep.cone_link = link_homology(cone, top, config.ring);
        const std::vector<long long> expected = sphere_betti(sphere, top);
        bool ok = rep.cone_link->betti.betti[0] == 1;
        for (int j = 1; j <= top; ++j) {
            rep.cone_dims_checked.push_back(j);
            ok = ok && rep.cone_link->betti.betti[j] == expected[j];
        }
        add("cone-link-homology", ok ? "pass" : "fail",
            "cone link Betti " + fmt_betti(rep.cone_link->betti.betti) + " vs " +
                fmt_betti(expected) + (cone.heuristic ? "; heuristic cone" : ""));
    });

    guarded("cone-link-transfer", [&] {
        ConeLinkOptions copt;
        copt.certificate.trials = config.trials;
        copt.certificate.seed = mix_seed(config.seed, 5);
        rep.transfer = cone_link_transfer(system, config.link_t, config.count,
                                          mix_seed(config.seed, 6), Mode::Germ, copt);
        if (rep.link && rep.cone_link)
            rep.transfer->obstruction = rep.cone_link->betti.betti[1] > rep.link->betti.betti[1];
        const Hypothesis& h = rep.transfer->run.hypothesis;
        add("cone-link-transfer", rep.transfer->obstruction ? "fail" : "info",
            std::string(h.passed ? "hypothesis holds" : "hypothesis violated") + ": dist_H " +
                fmt(h.dist_h) + ", bound " + fmt(h.bound) +
                (rep.transfer->obstruction ? "; Z/2 surjectivity obstruction" : ""));
    });

    guarded("choking", [&] {
        rep.choke = choking_probe(system, config.choke_scales, 1, config.count,
                                  mix_seed(config.seed, 7), Mode::Germ);
        add("choking", rep.choke->verdict == ChokeVerdict::Suspected ? "fail" : "pass",
            std::string(to_string(rep.choke->verdict)) + ": " + rep.choke->reason);
    });

    guarded("multiplicity", [&] {
        if (system.polynomials.size() == 1)
            rep.symbolic_order = symbolic_multiplicity(system.polynomials.front());
        if (!complex) {
            const bool ok = rep.symbolic_order && *rep.symbolic_order == 1;
            add("multiplicity", ok ? "pass" : "fail",
                "symbolic order " + (rep.symbolic_order ? std::to_string(*rep.symbolic_order)
                                                        : std::string("n/a")) +
                    "; covering degree is defined for complex systems only");
            return;
        }
        const TangentConeModel cone =
            tangent_cone(system, Mode::Germ, config.count, mix_seed(config.seed, 8));
        try {
            rep.multiplicity = covering_degree(system, cone, config.link_t, mix_seed(config.seed, 9));
        } catch (const ConeNotLinear& e) {
            add("multiplicity", "fail", std::string("ConeNotLinear: ") + e.what());
            return;
        }
        const int d = rep.multiplicity->degree;
        const bool ok = d == 1 && (!rep.symbolic_order || *rep.symbolic_order == 1);
        add("multiplicity", ok ? "pass" : "fail",
            "covering degree " + std::to_string(d) + ", symbolic order " +
                (rep.symbolic_order ? std::to_string(*rep.symbolic_order) : std::string("n/a")));
    });

    const auto has = [&](const char* status) {
        return std::any_of(rep.criteria.begin(), rep.criteria.end(),
                           [&](const Criterion& c) { return c.status == status; });
    };
    if (!complex) {
        rep.suppressed = true;
        rep.verdict = Verdict::Inconclusive;
        rep.caveat = "real field: the smoothness characterization holds for complex analytic "
                     "sets only, so no verdict is given";
    } else if (has("error")) {
        rep.verdict = Verdict::Inconclusive;
    } else if (has("fail")) {
        rep.verdict = Verdict::NonSmoothEvidence;
    } else {
        rep.verdict = Verdict::SmoothEvidence;
    }
    if (complex)
        rep.caveat = "homology proxy: pi_1 and pi_j are checked through H_j";
    return rep;
}

InfinityReport infinity_analysis(const PolynomialSystem& system, const InfinityConfig& config)
{
    if (system.mode != Mode::Infinity)
        throw InvalidArgument("infinity analysis needs an infinity-mode system");
    system.validate();
    if (config.scales.empty())
        throw InvalidArgument("no scales");

    InfinityReport rep;
    auto add = [&](std::string name, std::string status, std::string detail) {
        rep.criteria.push_back({std::move(name), std::move(status), std::move(detail)});
    };
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            add(name, "error", std::string(e.kind()) + ": " + e.what());
        }
    };

    guarded("llne-infinity", [&] {
        ProfileOptions popt;
        popt.density_check = config.density_check;
        rep.profile = llne_profile(system, config.scales, config.count, mix_seed(config.seed, 1),
                                   Mode::Infinity, popt);
        const bool bounded = rep.profile->divergence == Divergence::Bounded;
        add("llne-infinity", bounded ? "pass" : "fail",
            std::string("profile ") + to_string(rep.profile->divergence) + ", slope " +
                fmt(rep.profile->slope) + ", residual " + fmt(rep.profile->residual));
    });

    const double t = *std::max_element(config.scales.begin(), config.scales.end());
    guarded("h1-obstruction", [&] {
        rep.link = link_homology(system, t, config.count, mix_seed(config.seed, 3), 1, config.ring);
        const TangentConeModel cone =
            tangent_cone(system, Mode::Infinity, config.count, mix_seed(config.seed, 4));
        rep.cone_link = link_homology(cone, 1, config.ring);
        const long long b_link = rep.link->betti.betti[1], b_cone = rep.cone_link->betti.betti[1];
        rep.obstruction = b_cone > b_link;
        rep.obstruction_note =
            "rank H_1(cone link) = " + std::to_string(b_cone) + ", rank H_1(link at t = " +
            fmt(t) + ") = " + std::to_string(b_link) +
            (rep.obstruction ? ": no Z/2 epimorphism possible, so LLNE at infinity must fail"
                             : ": no obstruction");
        add("h1-obstruction", rep.obstruction ? "fail" : "pass", rep.obstruction_note);
    });

    guarded("cone-link-transfer", [&] {
        ConeLinkOptions copt;
        copt.certificate.trials = config.trials;
        copt.certificate.seed = mix_seed(config.seed, 5);
        rep.transfer = cone_link_transfer(system, t, std::min<std::size_t>(config.count, 1000),
                                          mix_seed(config.seed, 6), Mode::Infinity, copt);
        rep.transfer->obstruction = rep.obstruction;
        if (!rep.obstruction_note.empty())
            rep.transfer->obstruction_note = rep.obstruction_note;
        const Hypothesis& h = rep.transfer->run.hypothesis;
        add("cone-link-transfer", "info",
            std::string(h.passed ? "hypothesis holds" : "hypothesis violated") + ": dist_H " +
                fmt(h.dist_h) + ", bound " + fmt(h.bound));
    });

    if (config.choke)
        guarded("choking", [&] {
            rep.choke = choking_probe(system, config.choke_scales, 1, config.count,
                                      mix_seed(config.seed, 7), Mode::Infinity);
            add("choking", rep.choke->verdict == ChokeVerdict::Suspected ? "fail" : "pass",
                std::string(to_string(rep.choke->verdict)) + ": " + rep.choke->reason);
        });
    return rep;
}

}   // namespace lipsing
