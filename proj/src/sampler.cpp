#include "lipsing/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lipsing/errors.hpp"
#include "lipsing/parallel.hpp"

namespace lipsing {

namespace {

constexpr double kMaxStep = 0.5;
constexpr double kStepTol = 1e-9;

Point circle_point(const Point& u, const Point& w, double theta)
{
    return std::cos(theta) * u + std::sin(theta) * w;
}

}   // namespace

LinkProjector::LinkProjector(const PolynomialSystem& system, double t, SampleOptions options)
    : scaled_(system, t), options_(options),
      real_hypersurface_(system.field == Field::Real && system.polynomials.size() == 1)
{
}

std::optional<Point> LinkProjector::project(const Point& start) const
{
    const double norm = start.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        return std::nullopt;
    Point p = start / norm;
    const int m = scaled_.num_equations();
    const int n = scaled_.real_dim();
    Eigen::VectorXd values;
    Eigen::MatrixXd jac;
    Eigen::VectorXd F(m + 1);
    Eigen::MatrixXd J(m + 1, n);
    for (int it = 0; it < options_.newton_iterations; ++it) {
        scaled_.evaluate(p, values, jac);
        if (!values.allFinite() || !jac.allFinite())
            return std::nullopt;
        F.head(m) = values;
        F[m] = 0.5 * (p.squaredNorm() - 1.0);
        J.topRows(m) = jac;
        J.row(m) = p.transpose();
        Eigen::VectorXd step = -J.completeOrthogonalDecomposition().solve(F);
        if (!step.allFinite())
            return std::nullopt;
        const double len = step.norm();
        if (len > kMaxStep)
            step *= kMaxStep / len;
        p += step;
        p.normalize();
        if (len <= kStepTol && scaled_.residual(p) <= options_.tolerance)
            return p;
    }
    if (scaled_.residual(p) <= options_.tolerance * 1e-4)
        return p;
    return std::nullopt;
}

std::optional<Point> LinkProjector::bracket(const Point& start, const Point& direction,
                                            double max_angle) const
{
    if (!real_hypersurface_)
        return std::nullopt;
    const Point u = start.normalized();
    Point w = direction - direction.dot(u) * u;
    if (w.norm() < 1e-12)
        return std::nullopt;
    w.normalize();
    const int K = 64;
    const double h = max_angle / K;
    const int s0 = scaled_.sign(u);
    if (s0 == 0 && scaled_.residual(u) <= options_.tolerance)
        return u;
    // Walk outwards on both sides; the nearest sign change wins.
    for (int k = 1; k <= K; ++k) {
        for (double side : {1.0, -1.0}) {
            const double a = side * (k - 1) * h;
            const double b = side * k * h;
            const int sa = scaled_.sign(circle_point(u, w, a));
            const int sb = scaled_.sign(circle_point(u, w, b));
            if (sb == 0) {
                Point p = circle_point(u, w, b).normalized();
                if (scaled_.residual(p) <= options_.tolerance)
                    return p;
                continue;
            }
            if (sa == 0 || sa == sb)
                continue;
            double lo = a, hi = b;
            for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi)
                    break;
                const int sm = scaled_.sign(circle_point(u, w, mid));
                if (sm == 0) {
                    lo = hi = mid;
                    break;
                }
                (sm == sa ? lo : hi) = mid;
            }
            Point p = circle_point(u, w, 0.5 * (lo + hi)).normalized();
            if (scaled_.residual(p) <= options_.tolerance)
                return p;
        }
    }
    return std::nullopt;
}

std::optional<Point> LinkProjector::nearest(const Point& start) const
{
    if (auto p = project(start))
        return p;
    if (!real_hypersurface_)
        return std::nullopt;
    Eigen::VectorXd values;
    Eigen::MatrixXd jac;
    const Point u = start.normalized();
    scaled_.evaluate(u, values, jac);
    if (!jac.allFinite())
        return std::nullopt;
    return bracket(u, jac.row(0).transpose(), 0.5);
}

LinkSample sample_link(const PolynomialSystem& system, double t, std::size_t count,
                       std::uint64_t seed, Mode mode, SampleOptions options)
{
    if (!(t > 0.0))
        throw InvalidArgument("scale t must be positive");
    if (count == 0)
        throw InvalidArgument("sample count must be positive");
    system.validate();
    LinkProjector projector(system, t, options);
    const int dim = system.real_dim();
    const std::size_t targets = count * static_cast<std::size_t>(std::max(1, options.oversample));
    std::vector<std::optional<Point>> found(targets);
    parallel_for(targets, [&](std::size_t i) {
        std::mt19937_64 rng = stream_rng(seed, i);
        for (int attempt = 0; attempt < options.retries; ++attempt) {
            const Point u = random_unit_vector(rng, dim);
            if (projector.real_hypersurface()) {
                const Point v = random_unit_vector(rng, dim);
                if (auto p = projector.bracket(u, v, std::numbers::pi)) {
                    found[i] = p;
                    return;
                }
            }
            if (auto p = projector.project(u)) {
                found[i] = p;
                return;
            }
        }
    });

    LinkSample out;
    out.t = t;
    out.mode = mode;
    out.seed = seed;
    out.requested = count;
    PointSet pool;
    for (auto& p : found)
        if (p)
            pool.push_back(std::move(*p));
    out.converged = pool.size();
    if (2 * pool.size() < targets)
        throw InsufficientConvergence("only " + std::to_string(pool.size()) + " of " +
                                      std::to_string(targets) + " Newton targets converged at t = " +
                                      std::to_string(t));
    for (int idx : farthest_point_sample(pool, count))
        out.points.push_back(pool[idx]);
    for (const Point& p : out.points)
        out.residual_bound = std::max(out.residual_bound, projector.system().residual(p));
    return out;
}

TangentConeModel tangent_cone(const PolynomialSystem& system, Mode mode)
{
    system.validate();
    TangentConeModel model;
    model.cone = system;
    model.cone.name = system.name + " cone";
    model.cone.mode = Mode::Germ;
    model.cone.polynomials.clear();
    for (const Polynomial& p : system.polynomials) {
        if (p.is_zero())
            continue;
        model.cone.polynomials.push_back(
            p.homogeneous_part(mode == Mode::Germ ? p.order() : p.degree()));
    }
    model.heuristic = model.cone.polynomials.size() > 1;
    model.link.t = mode == Mode::Germ ? 0.0 : kInfinity;
    model.link.mode = mode;
    return model;
}

TangentConeModel tangent_cone(const PolynomialSystem& system, Mode mode, std::size_t count,
                              std::uint64_t seed)
{
    TangentConeModel model = tangent_cone(system, mode);
    model.link = sample_link(model.cone, 1.0, count, seed, mode);
    model.link.t = mode == Mode::Germ ? 0.0 : kInfinity;
    return model;
}

double hausdorff_distance(const PointSet& a, const PointSet& b)
{
    if (a.empty() || b.empty())
        throw EmptyInput("Hausdorff distance of an empty set");
    auto directed = [](const PointSet& x, const PointSet& y) {
        std::vector<double> best(x.size(), kInfinity);
        parallel_for(x.size(), [&](std::size_t i) {
            for (const Point& q : y)
                best[i] = std::min(best[i], (x[i] - q).squaredNorm());
        });
        return std::sqrt(*std::max_element(best.begin(), best.end()));
    };
    return std::max(directed(a, b), directed(b, a));
}

double sampling_gap(const PointSet& points)
{
    if (points.size() < 2)
        return 0.0;
    std::vector<double> best(points.size(), kInfinity);
    parallel_for(points.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i)
                best[i] = std::min(best[i], (points[i] - points[j]).squaredNorm());
    });
    return std::sqrt(*std::max_element(best.begin(), best.end()));
}

std::vector<int> farthest_point_sample(const PointSet& points, std::size_t count,
                                       double min_separation)
{
    std::vector<int> chosen;
    if (points.empty() || count == 0)
        return chosen;
    std::vector<double> dist(points.size(), kInfinity);
    int next = 0;
    while (chosen.size() < count) {
        chosen.push_back(next);
        double far = -1.0;
        int arg = -1;
        for (std::size_t i = 0; i < points.size(); ++i) {
            dist[i] = std::min(dist[i], (points[i] - points[next]).norm());
            if (dist[i] > far) {
                far = dist[i];
                arg = static_cast<int>(i);
            }
        }
        if (far <= min_separation)
            break;
        next = arg;
    }
    return chosen;
}

bool edge_on_link(const Point& a, const Point& b, const LinkProjector& projector, int steps,
                  double tolerance)
{
    const double len = (a - b).norm();
    const Point inc = (b - a) / steps;
    Point q = a;
    for (int i = 1; i <= steps; ++i) {
        auto next = projector.nearest(q + inc);
        if (!next)
            return false;
        q = *next;
    }
    return (q - b).norm() <= tolerance * len;
}

EmbeddedComplex link_complex(const LinkSample& sample, const LinkProjector& projector,
                             LinkComplexOptions options)
{
    const PointSet& pts = sample.points;
    return knn_complex(pts, options.k, options.triangles, [&](int a, int b) {
        return edge_on_link(pts[a], pts[b], projector, options.steps, options.tolerance);
    });
}

}   // namespace lipsing
