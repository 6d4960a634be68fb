#include <catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <numbers>

#include "lipsing/errors.hpp"
#include "lipsing/fixtures.hpp"
#include "lipsing/lne.hpp"

using namespace lipsing;
using std::numbers::pi;

namespace {

Point p2(double x, double y)
{
    Point p(2);
    p << x, y;
    return p;
}

// Floyd-Warshall on the edge list; independent of the Dijkstra code.
double brute_force_C(const EmbeddedComplex& c)
{
    const int n = static_cast<int>(c.num_vertices());
    std::vector<double> d(n * n, kInfinity);
    for (int i = 0; i < n; ++i)
        d[i * n + i] = 0.0;
    for (const Edge& e : c.edges()) {
        const double w = (c.vertex(e.a) - c.vertex(e.b)).norm();
        d[e.a * n + e.b] = d[e.b * n + e.a] = std::min(d[e.a * n + e.b], w);
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    double best = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::max(best, d[i * n + j] / (c.vertex(i) - c.vertex(j)).norm());
    return best;
}

EmbeddedComplex scaled_copy(const EmbeddedComplex& c, double s)
{
    PointSet pts;
    for (const Point& p : c.vertices())
        pts.push_back(s * p);
    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : c.edges())
        edges.emplace_back(e.a, e.b);
    return EmbeddedComplex(std::move(pts), edges);
}

PolynomialSystem cusp(Field field)
{
    return make_system("cusp", field, Mode::Germ, {"x", "y"}, {"y^2 - x^3"});
}

}   // namespace

TEST_CASE("segment is normally embedded")
{
    PointSet pts;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 50; ++i) {
        pts.push_back(p2(0.3 * i, -0.1 * i));
        if (i)
            edges.emplace_back(i - 1, i);
    }
    const LneReport r = lne_constant(EmbeddedComplex(pts, edges));
    CHECK(r.C == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(r.ratio_p99 <= r.C * 1.01);
}

TEST_CASE("256-gon: antipodal witness")
{
    const EmbeddedComplex gon = fixtures::regular_polygon(256, 1.0);
    const LneReport r = lne_constant(gon);
    const double oracle = 128.0 * 2.0 * std::sin(pi / 256) / 2.0;
    CHECK(r.C == Catch::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(r.C - pi / 2) <= 0.02 * pi / 2);
    CHECK(r.outer == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(r.witness_a - r.witness_b) == 128);
    CHECK(r.C == Catch::Approx(brute_force_C(gon)).epsilon(1e-12));
}

TEST_CASE("great circle is spherically normally embedded")
{
    PointSet pts;
    for (int i = 0; i < 256; ++i) {
        Point p = Point::Zero(3);
        p[0] = std::cos(2 * pi * i / 256);
        p[2] = std::sin(2 * pi * i / 256);
        pts.push_back(p);
    }
    const LneReport r = lne_constant(polygon_complex(pts), OuterMetric::Spherical);
    CHECK(r.C <= 1.0 + 1e-6);
}

TEST_CASE("tangent circles: large constant near the tangency")
{
    const EmbeddedComplex wedge = fixtures::pinched_circles(0.0, 64);
    const LneReport r = lne_constant(wedge);
    CHECK(r.C == Catch::Approx(brute_force_C(wedge)).epsilon(1e-12));
    // Nearest pair across the tangency: one step from the origin on each circle.
    const double step = 2.0 * std::sin(pi / 64);
    const double gap = 2.0 * (1.0 - std::cos(2 * pi / 64));
    CHECK(r.C >= 0.99 * (2 * step / gap));
    CHECK(r.C > 10.0);
    CHECK(r.point_a.norm() < 0.25);
    CHECK(r.point_b.norm() < 0.25);
}

TEST_CASE("C is scale invariant and grows when edges are removed")
{
    const EmbeddedComplex wedge = fixtures::pinched_circles(0.2, 48);
    const double c = lne_constant(wedge).C;
    CHECK(lne_constant(scaled_copy(wedge, 3.7)).C == Catch::Approx(c).epsilon(1e-12));
    CHECK(lne_constant(scaled_copy(wedge, 1e-3)).C == Catch::Approx(c).epsilon(1e-12));

    const EmbeddedComplex gon = fixtures::regular_polygon(40, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : gon.edges())
        edges.emplace_back(e.a, e.b);
    edges.emplace_back(0, 20);
    const double with_chord = lne_constant(EmbeddedComplex(gon.vertices(), edges)).C;
    CHECK(lne_constant(gon).C >= with_chord);
}

TEST_CASE("disconnected complex is rejected")
{
    const EmbeddedComplex two({p2(0, 0), p2(1, 0)}, {});
    CHECK_THROWS_AS(lne_constant(two), DisconnectedComplex);
}

TEST_CASE("profile fit and divergence rule")
{
    LlneProfile germ;
    germ.mode = Mode::Germ;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
        ProfileEntry e;
        e.t = t;
        e.report.C = 2.0 * std::pow(t, -0.5);
        germ.entries.push_back(e);
    }
    fit_profile(germ);
    CHECK(germ.slope == Catch::Approx(-0.5).epsilon(1e-12));
    CHECK(germ.residual < 1e-12);
    CHECK(germ.divergence == Divergence::Violating);

    LlneProfile inf = germ;
    inf.mode = Mode::Infinity;
    fit_profile(inf);
    CHECK(inf.divergence == Divergence::Bounded);
    for (ProfileEntry& e : inf.entries)
        e.t = 1.0 / e.t;
    fit_profile(inf);
    CHECK(inf.slope == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(inf.divergence == Divergence::Violating);

    LlneProfile flat = germ;
    for (ProfileEntry& e : flat.entries)
        e.report.C = 1.3;
    fit_profile(flat);
    CHECK(flat.divergence == Divergence::Bounded);

    const PolynomialSystem line =
        make_system("line", Field::Complex, Mode::Germ, {"x", "y"}, {"y"});
    CHECK_THROWS_AS(llne_profile(line, {0.1, 0.2, 0.05}, 50, 1, Mode::Germ), InvalidArgument);
    CHECK_THROWS_AS(llne_profile(line, {}, 50, 1, Mode::Germ), InvalidArgument);
}

TEST_CASE("complex line: C(t) stays near 1")
{
    const PolynomialSystem line =
        make_system("line", Field::Complex, Mode::Germ, {"x", "y"}, {"y - 2*x"});
    const LlneProfile prof = llne_profile(line, {1.0, 0.1, 0.01}, 200, 7, Mode::Germ);
    for (const ProfileEntry& e : prof.entries) {
        CHECK(e.report.C >= 1.0 - 1e-9);
        CHECK(e.report.C <= 1.05);
    }
    CHECK(prof.divergence == Divergence::Bounded);
}

TEST_CASE("complex cusp: C(t) diverges like t^(-1/2)")
{
    const auto start = std::chrono::steady_clock::now();
    const LlneProfile prof =
        llne_profile(cusp(Field::Complex), {1e-1, 1e-2, 1e-3, 1e-4}, 400, 11, Mode::Germ);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    INFO("slope " << prof.slope << " residual " << prof.residual << " in " << secs << " s");
    for (const ProfileEntry& e : prof.entries)
        INFO("t " << e.t << " C " << e.report.C << " doubled " << e.doubled_C);
    CHECK(prof.slope >= -0.7);
    CHECK(prof.slope <= -0.3);
    CHECK(prof.divergence == Divergence::Violating);
    for (std::size_t i = 1; i < prof.entries.size(); ++i)
        CHECK(prof.entries[i].report.C > prof.entries[i - 1].report.C);
}

TEST_CASE("germ estimate: smooth graph stays bounded")
{
    const PolynomialSystem graph =
        make_system("graph", Field::Complex, Mode::Germ, {"x", "y", "z"}, {"z - x*y"});
    for (double eps : {1.0, 0.1}) {
        const GermLneEstimate est = germ_lne_estimate(graph, eps, 2000, 3);
        INFO("eps " << eps << " C " << est.report.C);
        CHECK(est.report.C <= 2.0);
        CHECK(est.report.C >= 1.0);
    }
}

TEST_CASE("germ estimate: real cusp grows like t_min^(-1/2)")
{
    const PolynomialSystem real_cusp = cusp(Field::Real);
    const GermLneEstimate a = germ_lne_estimate(real_cusp, 1e-1, 100, 5);
    const GermLneEstimate b = germ_lne_estimate(real_cusp, 1e-3, 100, 5);
    // Branch oracle: at radius r the branches sit 2 r^{3/2} apart while the
    // path through the origin has length about 2r.
    const double exponent = std::log(b.report.C / a.report.C) /
                            std::log(a.radii.back() / b.radii.back());
    INFO("C " << a.report.C << " -> " << b.report.C << ", exponent " << exponent);
    CHECK(exponent >= 0.4);
    CHECK(exponent <= 0.6);
    CHECK(a.report.C == Catch::Approx(1.0 / std::sqrt(a.radii.back())).epsilon(0.15));
}

TEST_CASE("projection onto the variety keeps scale")
{
    const PolynomialSystem graph =
        make_system("graph", Field::Complex, Mode::Germ, {"x", "y", "z"}, {"z - x*y"});
    Point x(6);
    x << 1e-3, 2e-3, -1e-3, 0.5e-3, 3e-4, 1e-4;
    auto p = project_to_variety(graph, x);
    REQUIRE(p);
    const std::complex<double> X((*p)[0], (*p)[1]), Y((*p)[2], (*p)[3]), Z((*p)[4], (*p)[5]);
    CHECK(std::abs(Z - X * Y) <= 1e-9 * p->squaredNorm());
    CHECK((*p - x).norm() < x.norm());
}
