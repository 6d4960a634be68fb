#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lipsing/errors.hpp"
#include "lipsing/metric_complex.hpp"

using namespace lipsing;
using Catch::Approx;

namespace {

PointSet regular_polygon(int n, double radius)
{
    PointSet pts;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        Point p(2);
        p << radius * std::cos(a), radius * std::sin(a);
        pts.push_back(p);
    }
    return pts;
}

Point pt(double x, double y)
{
    Point p(2);
    p << x, y;
    return p;
}

}   // namespace

TEST_CASE("square geodesic between opposite corners")
{
    EmbeddedComplex sq({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    GeodesicPath p = shortest_path(sq, 0, 2);
    CHECK(p.length == Approx(2.0));
    CHECK(p.vertices.size() == 3);
    GeodesicPath self = shortest_path(sq, 3, 3);
    CHECK(self.length == 0.0);
    CHECK(self.vertices == std::vector<int>{3});
}

TEST_CASE("polygon inner distances")
{
    const int n = 256;
    EmbeddedComplex poly = polygon_complex(regular_polygon(n, 1.0));
    // Half the inscribed perimeter.
    const double oracle = n * std::sin(std::numbers::pi / n);
    GeodesicPath p = shortest_path(poly, 0, n / 2);
    CHECK(p.length == Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(p.length - std::numbers::pi) / std::numbers::pi < 0.01);

    Eigen::MatrixXd d = inner_distance_matrix(poly);
    CHECK(std::abs(d.maxCoeff() - std::numbers::pi) / std::numbers::pi < 0.01);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-vertex distance matrix")
{
    EmbeddedComplex c({pt(0, 0), pt(3, 4)}, {{0, 1}});
    Eigen::MatrixXd d = inner_distance_matrix(c);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(0, 1) == Approx(5.0));
    CHECK(d(1, 0) == Approx(5.0));
}

TEST_CASE("disconnected inputs are rejected")
{
    EmbeddedComplex c({pt(0, 0), pt(1, 0), pt(5, 5)}, {{0, 1}});
    CHECK(c.num_components() == 2);
    CHECK_THROWS_AS(inner_distance_matrix(c), DisconnectedComplex);
    CHECK_THROWS_AS(shortest_path(c, 0, 2), DisconnectedPair);
}

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(EmbeddedComplex({pt(0, 0), pt(0, 0)}, {}), InvalidComplex);
    CHECK_THROWS_AS(EmbeddedComplex({pt(0, 0), pt(1, 0)}, {{0, 0}}), InvalidComplex);
    CHECK_THROWS_AS(EmbeddedComplex({pt(0, 0), pt(1, 0)}, {{0, 2}}), InvalidComplex);
    CHECK_THROWS_AS(EmbeddedComplex({pt(0, 0), pt(1, 0), pt(0, 1)}, {{0, 1}, {1, 2}}, {{0, 1, 2}}),
                    InvalidComplex);
    EmbeddedComplex ok({pt(0, 0), pt(1, 0), pt(0, 1)}, {{1, 0}, {0, 1}, {1, 2}, {2, 0}},
                       {{2, 1, 0}});
    CHECK(ok.num_edges() == 3);
    for (const Edge& e : ok.edges())
        CHECK(std::abs(e.weight - (ok.vertex(e.a) - ok.vertex(e.b)).norm()) <= kMetricTol);
}

TEST_CASE("loop concatenation")
{
    const int n = 256;
    EmbeddedComplex poly = polygon_complex(regular_polygon(n, 1.0));
    std::vector<int> seq;
    for (int i = 0; i <= n; ++i)
        seq.push_back(i % n);
    LoopPath gen = make_loop(poly, seq);
    LoopPath constant = make_loop(poly, {0});

    LoopPath same = concatenate_loops(gen, constant);
    CHECK(same.vertices == gen.vertices);
    CHECK(same.length == gen.length);

    LoopPath twice = concatenate_loops(gen, gen);
    const double oracle = 2.0 * 2.0 * std::sin(std::numbers::pi / n) * n;
    CHECK(twice.length == Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(twice.length - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi) < 0.01);
    CHECK(twice.vertices.size() == 2 * n + 1);

    LoopPath back = concatenate_loops(gen, reversed(gen));
    CHECK(back.basepoint() == 0);

    LoopPath other = make_loop(poly, {1, 2, 1});
    CHECK_THROWS_AS(concatenate_loops(gen, other), BasepointMismatch);
}

TEST_CASE("metric properties on a random kNN complex")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PointSet pts;
    for (int i = 0; i < 120; ++i) {
        Point p(3);
        p << u(rng), u(rng), u(rng);
        pts.push_back(p);
    }
    EmbeddedComplex sparse = knn_complex(pts, 6);
    EmbeddedComplex dense = knn_complex(pts, 12);
    REQUIRE(sparse.connected());
    Eigen::MatrixXd ds = inner_distance_matrix(sparse);
    Eigen::MatrixXd dd = inner_distance_matrix(dense);
    const int n = static_cast<int>(pts.size());
    bool triangle_ok = true, inner_ge_outer = true, monotone = true;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (ds(a, b) < (pts[a] - pts[b]).norm() - kMetricTol)
                inner_ge_outer = false;
            if (dd(a, b) > ds(a, b) + kMetricTol)
                monotone = false;
            for (int c = 0; c < n; c += 7)
                if (ds(a, c) > ds(a, b) + ds(b, c) + kMetricTol)
                    triangle_ok = false;
        }
    CHECK(triangle_ok);
    CHECK(inner_ge_outer);
    CHECK(monotone);
}

TEST_CASE("flag triangles")
{
    auto tris = flag_triangles(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    REQUIRE(tris.size() == 1);
    CHECK(tris[0] == Triangle{0, 1, 2});
}
