#include "lipsing/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipsing/errors.hpp"
#include "lipsing/lne.hpp"
#include "lipsing/parallel.hpp"

namespace lipsing {

namespace {

using Z2 = H1Annotation::Class;

// Z/2 class of the tree path root -> v for every vertex reached by the tree.
std::vector<Z2> tree_prefixes(const ShortestPathTree& tree, const H1Annotation& ann)
{
    const std::size_t n = tree.distance.size();
    std::vector<int> order;
    for (std::size_t v = 0; v < n; ++v)
        if (std::isfinite(tree.distance[v]))
            order.push_back(static_cast<int>(v));
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return tree.distance[a] < tree.distance[b]; });
    std::vector<Z2> pre(n);
    for (int v : order) {
        if (tree.parent[v] < 0) {
            pre[v] = ann.zero();
        } else {
            pre[v] = pre[tree.parent[v]];
            H1Annotation::add(pre[v], ann.edge(tree.parent_edge[v]));
        }
    }
    return pre;
}

LoopPath cycle_through(const EmbeddedComplex& complex, const ShortestPathTree& tree, int u, int v)
{
    std::vector<int> seq = tree.path_to(u);
    std::vector<int> back = tree.path_to(v);
    seq.insert(seq.end(), back.rbegin(), back.rend());
    return make_loop(complex, std::move(seq));
}

bool same_class(const LoopClass& a, const LoopClass& b)
{
    if (a.z2 != b.z2)
        return false;
    if (a.z && b.z)
        return *a.z == *b.z;
    return true;
}

struct Classifier {
    const EmbeddedComplex& complex;
    H1Annotation z2;
    std::optional<IntegerH1> z;

    explicit Classifier(const EmbeddedComplex& c) : complex(c), z2(c)
    {
        try {
            z.emplace(c);
        } catch (const SizeBudgetExceeded&) {
        }
    }

    LoopClass of(const LoopPath& loop) const
    {
        LoopClass out{z2.of_loop(complex, loop), std::nullopt};
        if (z)
            out.z = z->of_loop(complex, loop);
        return out;
    }

    LoopClass sum(const LoopClass& a, const LoopClass& b) const
    {
        LoopClass out{a.z2, std::nullopt};
        H1Annotation::add(out.z2, b.z2);
        if (z && a.z && b.z)
            out.z = z->add(*a.z, *b.z);
        return out;
    }
};

LoopPath based_at(const EmbeddedComplex& complex, const LoopPath& loop, int base)
{
    if (loop.basepoint() == base)
        return loop;
    if (loop.is_constant())
        return make_loop(complex, {base});
    const GeodesicPath path = shortest_path(complex, base, loop.basepoint());
    std::vector<int> seq = path.vertices;
    seq.insert(seq.end(), loop.vertices.begin() + 1, loop.vertices.end());
    seq.insert(seq.end(), path.vertices.rbegin() + 1, path.vertices.rend());
    return make_loop(complex, std::move(seq));
}

std::string format(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}   // namespace

SystoleEstimate epsilon0_estimate(const EmbeddedComplex& complex)
{
    SystoleEstimate out;
    const H1Annotation ann(complex);
    if (ann.rank() == 0)
        return out;
    const std::size_t n = complex.num_vertices();
    double best = kInfinity;
    int best_root = -1, best_u = -1, best_v = -1;
    for (std::size_t r = 0; r < n; ++r) {
        const int root = static_cast<int>(r);
        const ShortestPathTree tree = shortest_path_tree(complex, root, best / 2);
        const std::vector<Z2> pre = tree_prefixes(tree, ann);
        for (std::size_t e = 0; e < complex.num_edges(); ++e) {
            const Edge& edge = complex.edges()[e];
            const double du = tree.distance[edge.a], dv = tree.distance[edge.b];
            if (!std::isfinite(du) || !std::isfinite(dv))
                continue;
            const int ei = static_cast<int>(e);
            if (tree.parent_edge[edge.a] == ei || tree.parent_edge[edge.b] == ei)
                continue;
            ++out.candidates;
            const double len = du + dv + edge.weight;
            if (!(len < best))
                continue;
            Z2 cls = pre[edge.a];
            H1Annotation::add(cls, pre[edge.b]);
            H1Annotation::add(cls, ann.edge(ei));
            if (H1Annotation::is_zero(cls))
                continue;
            best = len;
            best_root = root;
            best_u = edge.a;
            best_v = edge.b;
        }
    }
    out.epsilon0 = best;
    const ShortestPathTree tree = shortest_path_tree(complex, best_root);
    out.witness = cycle_through(complex, tree, best_u, best_v);
    return out;
}

std::vector<LoopPath> homology_generators(const EmbeddedComplex& complex, int basepoint)
{
    const H1Annotation ann(complex);
    std::vector<LoopPath> out;
    if (ann.rank() == 0)
        return out;
    const ShortestPathTree tree = shortest_path_tree(complex, basepoint);
    const std::vector<Z2> pre = tree_prefixes(tree, ann);
    struct Candidate {
        double length;
        int edge;
        Z2 cls;
    };
    std::vector<Candidate> cands;
    for (std::size_t e = 0; e < complex.num_edges(); ++e) {
        const Edge& edge = complex.edges()[e];
        const int ei = static_cast<int>(e);
        if (!std::isfinite(tree.distance[edge.a]) || !std::isfinite(tree.distance[edge.b]))
            continue;
        Z2 cls = pre[edge.a];
        H1Annotation::add(cls, pre[edge.b]);
        H1Annotation::add(cls, ann.edge(ei));
        if (!H1Annotation::is_zero(cls))
            cands.push_back({tree.distance[edge.a] + tree.distance[edge.b] + edge.weight, ei, cls});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.length < b.length; });

    // Greedy basis: eliminate against the pivots found so far.
    std::vector<std::pair<int, Z2>> basis;   // (pivot bit, reduced vector)
    auto top_bit = [](const Z2& c) {
        for (std::size_t w = c.size(); w-- > 0;)
            if (c[w])
                return static_cast<int>(w * 64 + 63 - __builtin_clzll(c[w]));
        return -1;
    };
    for (const Candidate& c : cands) {
        Z2 v = c.cls;
        for (const auto& [bit, row] : basis)
            if ((v[bit / 64] >> (bit % 64)) & 1)
                H1Annotation::add(v, row);
        const int bit = top_bit(v);
        if (bit < 0)
            continue;
        for (auto& [b, row] : basis)
            if ((row[bit / 64] >> (bit % 64)) & 1)
                H1Annotation::add(row, v);
        basis.emplace_back(bit, v);
        const Edge& edge = complex.edges()[c.edge];
        out.push_back(cycle_through(complex, tree, edge.a, edge.b));
        if (static_cast<int>(basis.size()) == ann.rank())
            break;
    }
    return out;
}

TransferredLoop transfer_loop(const LoopPath& loop, const EmbeddedComplex& x1,
                              const EmbeddedComplex& x0, double C, double eps,
                              const TransferOptions& options)
{
    if (!(eps > 0.0) || !(C >= 1.0 - kMetricTol))
        throw InvalidArgument("transfer needs eps > 0 and C >= 1");
    std::mt19937_64 rng(options.seed);
    TransferredLoop out;
    const double h = 1.5 * C * eps;   // half of the admissible arc length 3 C eps

    // Breakpoints along the polyline, by arc length.
    const auto& vs = loop.vertices;
    if (loop.is_constant()) {
        out.breakpoints.push_back(x1.vertex(loop.basepoint()));
    } else if (!options.randomized) {
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
            const Point& a = x1.vertex(vs[i]);
            const Point& b = x1.vertex(vs[i + 1]);
            const double len = (b - a).norm();
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / h)));
            for (int k = 0; k < pieces; ++k)
                out.breakpoints.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
            out.max_arc = std::max(out.max_arc, len / pieces);
        }
    } else {
        std::uniform_real_distribution<double> step(0.3 * h, 1.9 * h);
        std::vector<double> cum{0.0};
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            cum.push_back(cum.back() + (x1.vertex(vs[i + 1]) - x1.vertex(vs[i])).norm());
        const double total = cum.back();
        double s = 0.0;
        std::size_t seg = 0;
        while (true) {
            while (seg + 2 < cum.size() && cum[seg + 1] <= s)
                ++seg;
            const double len = cum[seg + 1] - cum[seg];
            const double f = len > 0.0 ? (s - cum[seg]) / len : 0.0;
            const Point& a = x1.vertex(vs[seg]);
            const Point& b = x1.vertex(vs[seg + 1]);
            out.breakpoints.push_back(a + (b - a) * f);
            const double next = s + step(rng);
            if (next >= total) {
                out.max_arc = std::max(out.max_arc, total - s);
                break;
            }
            out.max_arc = std::max(out.max_arc, next - s);
            s = next;
        }
    }

    // Targets y_i.
    for (std::size_t i = 0; i < out.breakpoints.size(); ++i) {
        const Point& x = out.breakpoints[i];
        if (i == 0 && options.target_basepoint) {
            const int y0 = *options.target_basepoint;
            const double d = (x0.vertex(y0) - x).norm();
            if (d > eps)
                throw NoNearbyPoint(0, d);
            out.targets.push_back(y0);
            continue;
        }
        std::vector<int> within;
        double nearest = kInfinity;
        int arg = -1;
        for (std::size_t v = 0; v < x0.num_vertices(); ++v) {
            const double d = (x0.vertex(static_cast<int>(v)) - x).norm();
            if (d < nearest) {
                nearest = d;
                arg = static_cast<int>(v);
            }
            if (d <= eps)
                within.push_back(static_cast<int>(v));
        }
        if (within.empty())
            throw NoNearbyPoint(i, nearest);
        if (options.randomized) {
            std::uniform_int_distribution<std::size_t> pick(0, within.size() - 1);
            out.targets.push_back(within[pick(rng)]);
        } else {
            out.targets.push_back(arg);
        }
    }

    std::vector<int> seq{out.targets.front()};
    auto join = [&](int from, int to) {
        if (from == to) {
            out.segment_lengths.push_back(0.0);
            return;
        }
        const GeodesicPath path = shortest_path(x0, from, to);
        out.segment_lengths.push_back(path.length);
        seq.insert(seq.end(), path.vertices.begin() + 1, path.vertices.end());
    };
    for (std::size_t i = 0; i + 1 < out.targets.size(); ++i)
        join(out.targets[i], out.targets[i + 1]);
    if (!loop.is_constant())
        join(out.targets.back(), out.targets.front());
    out.loop = make_loop(x0, std::move(seq));
    return out;
}

TransferRun transfer_certificate(const EmbeddedComplex& x0, const EmbeddedComplex& x1,
                                 const std::vector<LoopPath>& loops,
                                 const CertificateOptions& options)
{
    TransferRun run;
    Hypothesis& hyp = run.hypothesis;
    hyp.dist_h = hausdorff_distance(x0.vertices(), x1.vertices());
    hyp.C0 = lne_constant(x0).C;
    hyp.C1 = lne_constant(x1).C;
    hyp.C = std::max(hyp.C0, hyp.C1);
    hyp.epsilon0_x0 = epsilon0_estimate(x0).epsilon0;
    hyp.epsilon0_x1 = epsilon0_estimate(x1).epsilon0;
    const double c2 = 20.0 * hyp.C * hyp.C;
    hyp.bound = hyp.epsilon0_x0 / c2;
    hyp.iso_bound = std::min(hyp.epsilon0_x0, hyp.epsilon0_x1) / c2;
    hyp.epsilon0_override = options.epsilon0_override;
    // Sampling gap of X1 as a set: every point of an edge is within half its
    // length of a vertex.
    double longest = 0.0;
    for (const Edge& e : x1.edges())
        longest = std::max(longest, e.weight);
    hyp.eps = hyp.dist_h + 0.5 * longest;
    hyp.passed = hyp.dist_h < hyp.bound &&
                 (!options.epsilon0_override || hyp.dist_h < *options.epsilon0_override / c2);
    hyp.isomorphism = hyp.passed && hyp.dist_h < hyp.iso_bound;
    hyp.eps_admissible = hyp.eps < hyp.bound;

    // Base points: the globally closest pair.
    double closest = kInfinity;
    for (std::size_t i = 0; i < x1.num_vertices(); ++i)
        for (std::size_t j = 0; j < x0.num_vertices(); ++j) {
            const double d = (x1.vertex(static_cast<int>(i)) - x0.vertex(static_cast<int>(j))).norm();
            if (d < closest) {
                closest = d;
                run.x0_basepoint = static_cast<int>(i);
                run.y0_basepoint = static_cast<int>(j);
            }
        }

    const Classifier cls0(x0), cls1(x1);
    run.rank_x0 = cls0.z2.rank();
    run.rank_x1 = cls1.z2.rank();
    const double segment_bound = 5.0 * hyp.C * hyp.C * hyp.eps;

    std::vector<LoopPath> based;
    for (const LoopPath& l : loops)
        based.push_back(based_at(x1, l, run.x0_basepoint));

    auto transfer = [&](const LoopPath& l, bool randomized, std::uint64_t seed) {
        TransferOptions topt;
        topt.randomized = randomized;
        topt.seed = seed;
        topt.target_basepoint = run.y0_basepoint;
        return transfer_loop(l, x1, x0, hyp.C, hyp.eps, topt);
    };

    for (std::size_t li = 0; li < based.size(); ++li) {
        TransferCertificate cert;
        cert.hypothesis = hyp;
        cert.input = based[li];
        cert.input_class = cls1.of(based[li]);
        cert.segment_bound = segment_bound;
        cert.direction = hyp.isomorphism ? "isomorphism" : "epimorphism-only";
        if (hyp.passed && !hyp.eps_admissible)
            cert.caveat += "; eps = " + format(hyp.eps) +
                           " exceeds the bound, so randomized choices may change the class";
        if (!hyp.passed) {
            cert.direction.clear();
            cert.refusal = "HypothesisViolated: dist_H = " + format(hyp.dist_h) +
                           " is not below epsilon0(X0)/(20 C^2) = " + format(hyp.bound) +
                           " (C = " + format(hyp.C) + ", epsilon0(X0) = " +
                           format(hyp.epsilon0_x0) + ")";
            if (options.epsilon0_override)
                cert.refusal += " or the override bound " + format(*options.epsilon0_override / c2);
            run.certificates.push_back(std::move(cert));
            continue;
        }
        try {
            const TransferredLoop t = transfer(based[li], false, 0);
            cert.output = t.loop;
            cert.output_class = cls0.of(t.loop);
            for (double s : t.segment_lengths)
                cert.max_segment = std::max(cert.max_segment, s);
        } catch (const NoNearbyPoint& e) {
            cert.refusal = std::string("NoNearbyPoint: ") + e.what();
            run.certificates.push_back(std::move(cert));
            continue;
        }
        cert.trials = options.trials;
        std::vector<char> agree(options.trials, 0);
        parallel_for(options.trials, [&](std::size_t k) {
            try {
                const TransferredLoop t =
                    transfer(based[li], true, mix_seed(options.seed, li * options.trials + k));
                agree[k] = same_class(cls0.of(t.loop), *cert.output_class);
            } catch (const NoNearbyPoint&) {
                agree[k] = 0;
            }
        });
        cert.trials_agreeing = static_cast<std::size_t>(std::count(agree.begin(), agree.end(), 1));
        cert.stable = cert.trials_agreeing == cert.trials;
        run.certificates.push_back(std::move(cert));
    }

    if (hyp.passed && options.check_homomorphism) {
        for (std::size_t i = 0; i < based.size(); ++i)
            for (std::size_t j = i; j < based.size(); ++j) {
                const auto& ci = run.certificates[i];
                const auto& cj = run.certificates[j];
                if (!ci.output_class || !cj.output_class)
                    continue;
                ++run.homomorphism.pairs;
                try {
                    const TransferredLoop t =
                        transfer(concatenate_loops(based[i], based[j]), false, 0);
                    if (same_class(cls0.of(t.loop),
                                   cls0.sum(*ci.output_class, *cj.output_class)))
                        ++run.homomorphism.holding;
                } catch (const NoNearbyPoint&) {
                }
            }
    }
    return run;
}

ConeLinkTransfer cone_link_transfer(const PolynomialSystem& system, double t, std::size_t count,
                                    std::uint64_t seed, Mode mode, const ConeLinkOptions& options)
{
    ConeLinkTransfer out;
    out.mode = mode;
    out.t = t;
    const LinkSample sample = sample_link(system, t, count, mix_seed(seed, 0), mode);
    const LinkProjector projector(system, t);
    const EmbeddedComplex x1 = link_complex(sample, projector, options.complex);

    const TangentConeModel cone = tangent_cone(system, mode, count, mix_seed(seed, 1));
    const LinkProjector cone_projector(cone.cone, 1.0);
    const EmbeddedComplex x0 = link_complex(cone.link, cone_projector, options.complex);
    out.heuristic_cone = cone.heuristic;
    out.link_points = x1.num_vertices();
    out.cone_points = x0.num_vertices();

    const std::vector<LoopPath> gens = homology_generators(x1, 0);
    CertificateOptions copt = options.certificate;
    if (copt.seed == 0)
        copt.seed = mix_seed(seed, 2);
    out.run = transfer_certificate(x0, x1, gens, copt);
    out.obstruction = out.run.rank_x0 > out.run.rank_x1;
    if (out.obstruction)
        out.obstruction_note = "rank H_1(cone link; Z/2) = " + std::to_string(out.run.rank_x0) +
                               " exceeds rank H_1(link; Z/2) = " + std::to_string(out.run.rank_x1) +
                               ": no Z/2-epimorphism possible, so " +
                               (mode == Mode::Germ ? "LLNE at the point" : "LLNE at infinity") +
                               " must fail";
    return out;
}

}   // namespace lipsing
