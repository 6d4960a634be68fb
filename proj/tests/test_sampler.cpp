#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "lipsing/errors.hpp"
#include "lipsing/fixtures.hpp"
#include "lipsing/sampler.hpp"

using namespace lipsing;
using cd = std::complex<double>;

namespace {

PolynomialSystem cusp(Field field = Field::Complex)
{
    return make_system("cusp", field, Mode::Germ, {"x", "y"}, {"y^2 - x^3"});
}

}   // namespace

TEST_CASE("parser")
{
    Polynomial p = parse_polynomial("y^2 - x^3", {"x", "y"});
    CHECK(p.num_terms() == 2);
    CHECK(p.order() == 2);
    CHECK(p.degree() == 3);

    PolynomialSystem q =
        make_system("quadric", Field::Complex, Mode::Germ, {"x", "y", "z"}, {"x^2 + y^2 + z^2"});
    CHECK(q.real_dim() == 6);
    CHECK(q.real_equations() == 2);

    Polynomial b = parse_polynomial("x^2021 + y^2021 - z^2021", {"x", "y", "z"});
    CHECK(b.num_terms() == 3);
    CHECK(b.order() == 2021);

    CHECK(parse_polynomial("-x^2", {"x"}).terms().begin()->second == -1);
    CHECK(parse_polynomial("(x+1)^2 - x^2 - 2*x", {"x"}).to_string({"x"}) == "1");
    CHECK(parse_polynomial("3/2*x - x/2", {"x"}).to_string({"x"}) == "x");
    CHECK(parse_polynomial("2*x*y - 3", {"x", "y"}).to_string({"x", "y"}) == "2*x*y - 3");

    try {
        parse_polynomial("2x + y", {"x", "y"});
        FAIL("implicit multiplication accepted");
    } catch (const ParseError& e) {
        CHECK(e.position() == 1);
    }
    CHECK_THROWS_AS(parse_polynomial("x y", {"x", "y"}), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x^", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_polynomial("w + 1", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x / y", {"x", "y"}), ParseError);
    CHECK_THROWS_AS(parse_polynomial("(x + 1", {"x"}), ParseError);
    CHECK_THROWS_AS(parse_polynomial("", {"x"}), ParseError);
    CHECK_THROWS_AS(make_system("bad", Field::Real, Mode::Germ, {"x"}, {"x + 1"}), InvalidSystem);
    CHECK_THROWS_AS(make_system("bad", Field::Real, Mode::Germ, {"x"}, {"x - x"}), InvalidSystem);
}

TEST_CASE("variety files")
{
    PolynomialSystem s = parse_system(R"({"name": "cusp", "field": "complex",
        "variables": ["x", "y"], "polynomials": ["y^2 - x^3"]})");
    CHECK(s.mode == Mode::Germ);
    CHECK(s.field == Field::Complex);
    CHECK_THROWS_AS(parse_system("{not json"), ParseError);
    CHECK_THROWS_AS(parse_system(R"({"field": "quaternion", "variables": ["x"],
        "polynomials": ["x"]})"),
                    InvalidSystem);
    PolynomialSystem inf = parse_system(R"({"name": "sphere", "field": "complex", "mode": "infinity",
        "variables": ["x", "y", "z"], "polynomials": ["x^2 + y^2 + z^2 - 1"]})");
    CHECK(inf.mode == Mode::Infinity);
}

TEST_CASE("scaled evaluation does not overflow")
{
    PolynomialSystem b = make_system("brieskorn", Field::Real, Mode::Germ, {"a", "b", "c", "d"},
                                     {"a^2021 + b^2021 - c^2021"});
    ScaledSystem big(b, 1e6);
    Point p(4);
    p << 0.6, 0.5, 0.62, 0.1;
    CHECK(std::isfinite(big.residual(p)));
    CHECK(big.sign(p) == -1);
    p << 0.7, 0.5, 0.62, 0.1;
    CHECK(big.sign(p) == 1);
    Eigen::VectorXd v;
    Eigen::MatrixXd j;
    big.evaluate(p, v, j);
    CHECK(v.allFinite());
    CHECK(j.allFinite());
}

TEST_CASE("linear link")
{
    PolynomialSystem line = make_system("line", Field::Real, Mode::Germ, {"x", "y"}, {"y"});
    for (double t : {0.01, 1.0, 100.0}) {
        LinkSample s = sample_link(line, t, 10, 3, Mode::Germ);
        REQUIRE(s.points.size() == 2);
        for (const Point& p : s.points) {
            CHECK(std::abs(std::abs(p[0]) - 1.0) < 1e-9);
            CHECK(std::abs(p[1]) < 1e-9);
        }
    }
}

TEST_CASE("complex cusp link")
{
    const double t = 0.01;
    LinkSample s = sample_link(cusp(), t, 400, 11, Mode::Germ);
    REQUIRE(s.points.size() == 400);
    CHECK(s.residual_bound <= 1e-10);
    for (const Point& p : s.points) {
        CHECK(std::abs(p.norm() - 1.0) <= 1e-9);
        // Membership via the branch parametrization x = s^2, y = s^3.
        const cd X = t * cd(p[0], p[1]);
        const cd Y = t * cd(p[2], p[3]);
        const cd sp = Y / X;
        CHECK(std::abs(X - sp * sp) <= 1e-8 * std::abs(X));
    }
    LinkSample again = sample_link(cusp(), t, 400, 11, Mode::Germ);
    REQUIRE(again.points.size() == s.points.size());
    bool identical = true;
    for (std::size_t i = 0; i < s.points.size(); ++i)
        identical = identical && (s.points[i].array() == again.points[i].array()).all();
    CHECK(identical);
}

TEST_CASE("tangent cones")
{
    TangentConeModel c = tangent_cone(cusp(), Mode::Germ);
    REQUIRE(c.cone.polynomials.size() == 1);
    CHECK(c.cone.polynomials[0].to_string({"x", "y"}) == "y^2");
    CHECK_FALSE(c.heuristic);

    PolynomialSystem sphere = make_system("affine quadric", Field::Complex, Mode::Infinity,
                                          {"x", "y", "z"}, {"x^2 + y^2 + z^2 - 1"});
    TangentConeModel ci = tangent_cone(sphere, Mode::Infinity);
    CHECK(ci.cone.polynomials[0].to_string({"x", "y", "z"}) == "x^2 + y^2 + z^2");

    PolynomialSystem lin =
        make_system("plane", Field::Complex, Mode::Germ, {"x", "y", "z"}, {"x + 2*y - z"});
    TangentConeModel cl = tangent_cone(lin, Mode::Germ);
    CHECK(cl.cone.polynomials[0].to_string({"x", "y", "z"}) == "x + 2*y - z");
    for (const auto& p : cl.cone.polynomials)
        CHECK(p.is_homogeneous());
}

TEST_CASE("cone links are scale invariant")
{
    PolynomialSystem q =
        make_system("quadric", Field::Complex, Mode::Germ, {"x", "y", "z"}, {"x^2 + y^2 + z^2"});
    LinkSample a = sample_link(q, 0.1, 300, 5, Mode::Germ);
    LinkSample b = sample_link(q, 0.001, 300, 6, Mode::Germ);
    const double gap = std::max(sampling_gap(a.points), sampling_gap(b.points));
    CHECK(hausdorff_distance(a.points, b.points) <= 2.0 * gap);
}

TEST_CASE("germ links converge to the cone link")
{
    TangentConeModel cone = tangent_cone(cusp(), Mode::Germ, 400, 2);
    double previous = kInfinity;
    for (double t : {1e-1, 1e-2, 1e-3}) {
        LinkSample s = sample_link(cusp(), t, 400, 2, Mode::Germ);
        const double d = hausdorff_distance(s.points, cone.link.points);
        CHECK(d < previous);
        previous = d;
    }
}

TEST_CASE("hausdorff distance")
{
    PointSet a = fixtures::regular_polygon_points(256, 1.0);
    PointSet b = fixtures::regular_polygon_points(256, 1.02);
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == Catch::Approx(0.02).epsilon(1e-9));
    PointSet single = {Point::Zero(2)};
    CHECK(hausdorff_distance(single, a) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(hausdorff_distance({}, a), EmptyInput);
}

TEST_CASE("link complexes avoid shortcuts between sheets")
{
    const double t = 1e-4;
    LinkSample s = sample_link(cusp(), t, 400, 9, Mode::Germ);
    LinkProjector proj(cusp(), t);
    EmbeddedComplex c = link_complex(s, proj);
    CHECK(c.connected());
    // Branch parameter arg(y/x); sheets at the same x differ by pi.
    int crossings = 0;
    for (const Edge& e : c.edges()) {
        const Point& p = c.vertex(e.a);
        const Point& q = c.vertex(e.b);
        const cd sp = cd(p[2], p[3]) / cd(p[0], p[1]);
        const cd sq = cd(q[2], q[3]) / cd(q[0], q[1]);
        if (std::abs(sp - sq) > 0.5 * std::abs(sp + sq))
            ++crossings;
    }
    CHECK(crossings == 0);
}
