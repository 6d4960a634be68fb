#include "lipsing/lne.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>

#include "lipsing/errors.hpp"
#include "lipsing/parallel.hpp"

namespace lipsing {

namespace {

constexpr int kBins = 4096;
constexpr double kLogRatioMax = 14.0;   // ratios up to about 1.2e6 are binned exactly

double arc(double chord)
{
    return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

int bin_of(double ratio)
{
    const double x = std::log(std::max(ratio, 1.0)) / kLogRatioMax * kBins;
    return std::clamp(static_cast<int>(x), 0, kBins - 1);
}

double bin_value(int bin)
{
    return std::exp((bin + 0.5) / kBins * kLogRatioMax);
}

double quantile(const std::vector<std::uint64_t>& hist, std::uint64_t total, double q)
{
    const auto rank = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(total)));
    std::uint64_t seen = 0;
    for (int b = 0; b < kBins; ++b) {
        seen += hist[b];
        if (seen >= std::max<std::uint64_t>(rank, 1))
            return bin_value(b);
    }
    return bin_value(kBins - 1);
}

bool tracked_on_variety(const PolynomialSystem& system, const Point& a, const Point& b,
                        const GermEstimateOptions& options)
{
    const double len = (a - b).norm();
    const Point inc = (b - a) / options.steps;
    Point q = a;
    for (int i = 1; i <= options.steps; ++i) {
        auto next = project_to_variety(system, q + inc, options.sampling);
        if (!next)
            return false;
        q = *next;
    }
    return (q - b).norm() <= options.tolerance * len;
}

}   // namespace

const char* to_string(Divergence d)
{
    return d == Divergence::Violating ? "LLNE-violating" : "bounded";
}

LneReport lne_constant(const EmbeddedComplex& complex, OuterMetric metric)
{
    const std::size_t n = complex.num_vertices();
    if (n == 0)
        throw EmptyInput("LNE constant of an empty complex");
    if (!complex.connected())
        throw DisconnectedComplex("LNE constant needs a connected complex (" +
                                  std::to_string(complex.num_components()) + " components)");

    std::vector<double> weights;
    if (metric == OuterMetric::Spherical) {
        weights.reserve(complex.num_edges());
        for (const Edge& e : complex.edges())
            weights.push_back(arc(e.weight));
    }
    auto outer = [&](int i, int j) {
        const double d = (complex.vertex(i) - complex.vertex(j)).norm();
        return metric == OuterMetric::Spherical ? arc(d) : d;
    };

    struct Best {
        double ratio = 0.0;
        int j = -1;
        double inner = 0.0;
        double outer = 0.0;
    };
    std::vector<Best> best(n);
    std::vector<std::atomic<std::uint64_t>> hist(kBins);
    parallel_for(n, [&](std::size_t src) {
        const int i = static_cast<int>(src);
        const ShortestPathTree tree = shortest_path_tree(complex, i, kInfinity, weights);
        std::array<std::uint64_t, kBins> local{};
        for (std::size_t tj = src + 1; tj < n; ++tj) {
            const int j = static_cast<int>(tj);
            const double o = outer(i, j);
            const double r = tree.distance[j] / o;
            ++local[bin_of(r)];
            if (r > best[src].ratio)
                best[src] = {r, j, tree.distance[j], o};
        }
        for (int b = 0; b < kBins; ++b)
            if (local[b])
                hist[b].fetch_add(local[b], std::memory_order_relaxed);
    });

    LneReport report;
    report.metric = metric;
    report.pairs = n * (n - 1) / 2;
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (best[i].j >= 0 && best[i].ratio > top) {
            top = best[i].ratio;
            report.witness_a = static_cast<int>(i);
            report.witness_b = best[i].j;
            report.inner = best[i].inner;
            report.outer = best[i].outer;
        }
    }
    report.C = std::max(1.0, top);
    if (report.witness_a >= 0) {
        report.point_a = complex.vertex(report.witness_a);
        report.point_b = complex.vertex(report.witness_b);
    }
    if (report.pairs > 0) {
        std::vector<std::uint64_t> counts(kBins);
        for (int b = 0; b < kBins; ++b)
            counts[b] = hist[b].load();
        report.ratio_median = quantile(counts, report.pairs, 0.5);
        report.ratio_p90 = quantile(counts, report.pairs, 0.9);
        report.ratio_p99 = quantile(counts, report.pairs, 0.99);
    }
    return report;
}

void fit_profile(LlneProfile& profile)
{
    const std::size_t m = profile.entries.size();
    profile.slope = profile.intercept = profile.residual = 0.0;
    profile.divergence = Divergence::Bounded;
    if (m < 2)
        return;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const ProfileEntry& e : profile.entries) {
        const double x = std::log(e.t), y = std::log(e.report.C);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    profile.slope = (m * sxy - sx * sy) / denom;
    profile.intercept = (sy - profile.slope * sx) / m;
    double ss = 0.0;
    for (const ProfileEntry& e : profile.entries) {
        const double r = std::log(e.report.C) - (profile.intercept + profile.slope * std::log(e.t));
        ss += r * r;
    }
    profile.residual = std::sqrt(ss / m);
    const double oriented = profile.mode == Mode::Germ ? -profile.slope : profile.slope;
    if (oriented >= kViolatingSlope && profile.residual < kViolatingResidual)
        profile.divergence = Divergence::Violating;
}

LlneProfile llne_profile(const PolynomialSystem& system, const std::vector<double>& t_list,
                         std::size_t count, std::uint64_t seed, Mode mode,
                         ProfileOptions options)
{
    if (t_list.empty())
        throw InvalidArgument("profile needs at least one scale");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0) || !std::isfinite(t_list[i]))
            throw InvalidArgument("scales must be positive and finite");
        if (i > 0 && !((t_list[i] - t_list[i - 1]) * (t_list[1] - t_list[0]) > 0.0))
            throw InvalidArgument("scales must be strictly monotone");
    }

    auto measure = [&](double t, std::size_t n, std::uint64_t s, ProfileEntry* entry) {
        const LinkSample sample = sample_link(system, t, n, s, mode, options.sampling);
        const LinkProjector projector(system, t, options.sampling);
        const EmbeddedComplex complex = link_complex(sample, projector, options.complex);
        LneReport r = lne_constant(complex, OuterMetric::Spherical);
        if (entry) {
            entry->points = complex.num_vertices();
            entry->edges = complex.num_edges();
        }
        return r;
    };

    LlneProfile profile;
    profile.mode = mode;
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        ProfileEntry entry;
        entry.t = t_list[i];
        const std::uint64_t s = mix_seed(seed, i);
        entry.report = measure(entry.t, count, s, &entry);
        if (options.density_check) {
            entry.doubled_C = measure(entry.t, 2 * count, s, nullptr).C;
            entry.low_confidence =
                std::abs(entry.doubled_C - entry.report.C) > kDensityAgreement * entry.report.C;
        }
        profile.low_confidence = profile.low_confidence || entry.low_confidence;
        profile.entries.push_back(std::move(entry));
    }
    fit_profile(profile);
    return profile;
}

std::optional<Point> project_to_variety(const PolynomialSystem& system, const Point& x,
                                        SampleOptions options)
{
    const double s = x.norm();
    if (!std::isfinite(s))
        return std::nullopt;
    if (s < 1e-300)
        return Point::Zero(x.size());
    const ScaledSystem scaled(system, s);
    Point y = x / s;
    Eigen::VectorXd values;
    Eigen::MatrixXd jac;
    for (int it = 0; it < options.newton_iterations; ++it) {
        scaled.evaluate(y, values, jac);
        if (!values.allFinite() || !jac.allFinite())
            return std::nullopt;
        Eigen::VectorXd step = -jac.completeOrthogonalDecomposition().solve(values);
        if (!step.allFinite())
            return std::nullopt;
        const double len = step.norm();
        if (len > 0.5)
            step *= 0.5 / len;
        y += step;
        if (len <= 1e-9 && scaled.residual(y) <= options.tolerance)
            return Point(s * y);
    }
    if (scaled.residual(y) <= options.tolerance * 1e-4)
        return Point(s * y);
    return std::nullopt;
}

GermLneEstimate germ_lne_estimate(const PolynomialSystem& system, double epsilon,
                                  std::size_t count, std::uint64_t seed,
                                  GermEstimateOptions options)
{
    if (system.mode != Mode::Germ)
        throw InvalidArgument("germ LNE estimate needs a germ-mode system");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("ball radius must be positive");
    if (options.scales < 2)
        throw InvalidArgument("germ LNE estimate needs at least two radii");
    system.validate();

    GermLneEstimate out;
    const std::size_t per_scale =
        std::max<std::size_t>(8, count / static_cast<std::size_t>(options.scales));
    PointSet points;
    points.push_back(Point::Zero(system.real_dim()));
    std::vector<std::size_t> layer_begin{1};
    for (int i = 0; i < options.scales; ++i) {
        const double r = epsilon * std::pow(10.0, -3.0 * i / (options.scales - 1));
        out.radii.push_back(r);
        const LinkSample layer =
            sample_link(system, r, per_scale, mix_seed(seed, i), Mode::Germ, options.sampling);
        for (const Point& p : layer.points)
            points.push_back(r * p);
        layer_begin.push_back(points.size());
    }
    auto admissible = [&](int a, int b) {
        return tracked_on_variety(system, points[a], points[b], options);
    };
    const EmbeddedComplex knn = knn_complex(points, options.k, false, admissible);
    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : knn.edges())
        edges.emplace_back(e.a, e.b);

    // Layers are far apart relative to their own spacing, so kNN alone can
    // leave them unjoined: link every vertex to its nearest few in the next
    // layer inwards, and the origin to the whole innermost layer.
    const int radial = 3;
    auto join = [&](int a, int b) {
        if (!knn.find_edge(a, b) && admissible(a, b))
            edges.emplace_back(std::min(a, b), std::max(a, b));
    };
    for (int i = 0; i + 1 < options.scales; ++i) {
        const std::size_t lo = layer_begin[i + 1], hi = layer_begin[i + 2];
        for (std::size_t v = layer_begin[i]; v < layer_begin[i + 1]; ++v) {
            std::vector<std::pair<double, int>> near;
            for (std::size_t w = lo; w < hi; ++w)
                near.emplace_back((points[v] - points[w]).squaredNorm(), static_cast<int>(w));
            const std::size_t m = std::min<std::size_t>(radial, near.size());
            std::partial_sort(near.begin(), near.begin() + m, near.end());
            for (std::size_t j = 0; j < m; ++j)
                join(static_cast<int>(v), near[j].second);
        }
    }
    for (std::size_t v = layer_begin[options.scales - 1]; v < points.size(); ++v)
        join(0, static_cast<int>(v));

    const EmbeddedComplex complex(points, edges);
    out.points = complex.num_vertices();
    out.edges = complex.num_edges();
    out.report = lne_constant(complex, OuterMetric::Euclidean);
    return out;
}

}   // namespace lipsing
