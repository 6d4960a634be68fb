#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lipsing/errors.hpp"
#include "lipsing/fixtures.hpp"
#include "lipsing/homology.hpp"

using namespace lipsing;

namespace {

std::vector<long long> z2(const ChainComplex& c)
{
    return betti(c, Ring::Z2).betti;
}

long long euler_from_counts(const ChainComplex& c)
{
    long long chi = 0;
    for (int d = 0; d <= c.max_dim(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(c.size(d));
    return chi;
}

long long euler_from_betti(const std::vector<long long>& b)
{
    long long chi = 0;
    for (std::size_t d = 0; d < b.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * b[d];
    return chi;
}

PointSet fibonacci_sphere(int n)
{
    PointSet pts;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(1.0 - z * z);
        Point p(3);
        p << r * std::cos(golden * i), r * std::sin(golden * i), z;
        pts.push_back(p);
    }
    return pts;
}

// Linear scan over candidate radii, independent of the binary search.
double brute_force_filling_radius(const CycleClass& cycle, const ChainComplex& c,
                                  const PointSet& pts)
{
    std::vector<int> support;
    for (std::size_t s : cycle.chain)
        for (int v : c.simplex(cycle.dim, s))
            support.push_back(v);
    std::vector<double> dist(pts.size(), kInfinity);
    for (std::size_t v = 0; v < pts.size(); ++v)
        for (int s : support)
            dist[v] = std::min(dist[v], (pts[v] - pts[s]).norm());
    std::vector<double> radii(dist.begin(), dist.end());
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        std::vector<std::vector<Simplex>> higher(2);
        for (std::size_t i = 0; i < c.size(1); ++i)
            higher[0].push_back(c.simplex(1, i));
        for (std::size_t i = 0; i < c.size(2); ++i) {
            Simplex s = c.simplex(2, i);
            if (dist[s[0]] <= r && dist[s[1]] <= r && dist[s[2]] <= r)
                higher[1].push_back(s);
        }
        ChainComplex sub(c.size(0), higher);
        std::vector<std::size_t> chain;
        for (std::size_t e : cycle.chain)
            chain.push_back(*sub.index_of(c.simplex(1, e)));
        if (is_null_homologous(make_cycle(sub, pts, 1, chain), sub).null)
            return r;
    }
    return kInfinity;
}

}   // namespace

TEST_CASE("classical complexes")
{
    ChainComplex oct = ChainComplex::from(fixtures::octahedron());
    CHECK(oct.boundary_squared_zero());
    CHECK(z2(oct) == std::vector<long long>{1, 0, 1});
    CHECK(betti(oct, Ring::Z).betti == std::vector<long long>{1, 0, 1});

    ChainComplex torus = ChainComplex::from(fixtures::seven_vertex_torus());
    CHECK(torus.size(1) == 21);
    CHECK(torus.size(2) == 14);
    CHECK(z2(torus) == std::vector<long long>{1, 2, 1});
    BettiVector tz = betti(torus, Ring::Z);
    CHECK(tz.betti == std::vector<long long>{1, 2, 1});
    CHECK(tz.torsion[1].empty());

    ChainComplex empty;
    CHECK(betti(empty).betti.empty());
}

TEST_CASE("real projective 3-space")
{
    ChainComplex rp3 = fixtures::real_projective_3space();
    REQUIRE(rp3.max_dim() == 3);
    CHECK(rp3.boundary_squared_zero());
    // Closed pseudomanifold: every triangle lies on exactly two tetrahedra.
    std::vector<int> cofaces(rp3.size(2), 0);
    for (std::size_t j = 0; j < rp3.size(3); ++j)
        for (std::size_t f : rp3.faces(3, j))
            ++cofaces[f];
    CHECK(std::all_of(cofaces.begin(), cofaces.end(), [](int k) { return k == 2; }));
    CHECK(z2(rp3) == std::vector<long long>{1, 1, 1, 1});
    BettiVector bz = betti(rp3, Ring::Z);
    CHECK(bz.betti == std::vector<long long>{1, 0, 0, 1});
    REQUIRE(bz.torsion.size() == 4);
    CHECK(bz.torsion[1] == std::vector<long long>{2});
    CHECK(bz.torsion[2].empty());
}

TEST_CASE("euler characteristic and disjoint unions")
{
    for (const ChainComplex& c : {ChainComplex::from(fixtures::octahedron()),
                                  ChainComplex::from(fixtures::torus_grid(6, 9, 1.0, 3.0)),
                                  fixtures::real_projective_3space()})
        CHECK(euler_from_counts(c) == euler_from_betti(z2(c)));

    EmbeddedComplex a = fixtures::octahedron();
    EmbeddedComplex b = fixtures::seven_vertex_torus();
    PointSet pts = a.vertices();
    for (Point p : b.vertices()) {
        p[0] += 100.0;
        pts.push_back(p);
    }
    std::vector<std::vector<Simplex>> higher(2);
    const int off = static_cast<int>(a.num_vertices());
    for (const Edge& e : a.edges())
        higher[0].push_back({e.a, e.b});
    for (const Edge& e : b.edges())
        higher[0].push_back({e.a + off, e.b + off});
    for (const Triangle& t : a.triangles())
        higher[1].push_back({t[0], t[1], t[2]});
    for (const Triangle& t : b.triangles())
        higher[1].push_back({t[0] + off, t[1] + off, t[2] + off});
    ChainComplex both(pts.size(), higher);
    CHECK(z2(both) == std::vector<long long>{2, 2, 2});
}

TEST_CASE("rips complexes")
{
    PointSet tri;
    for (double a : {0.0, 2.0, 4.0}) {
        Point p(2);
        p << std::cos(a), std::sin(a);
        tri.push_back(p);
    }
    RipsComplex r = rips_complex(tri, 2.0, 2);
    CHECK(r.chain.size(2) == 1);
    CHECK(r.complex.triangles().size() == 1);

    RipsComplex sparse = rips_complex(tri, 0.1, 2);
    CHECK(z2(sparse.chain)[0] == 3);

    PointSet sphere = fibonacci_sphere(500);
    RipsComplex s2 = rips_complex(sphere, 0.35, 3);
    CHECK(s2.chain.boundary_squared_zero());
    auto b = z2(s2.chain);
    CHECK(b[0] == 1);
    CHECK(b[1] == 0);
    CHECK(b[2] == 1);

    CHECK_THROWS_AS(rips_complex(sphere, 1.5, 3, 10000), SizeBudgetExceeded);
}

TEST_CASE("null homology")
{
    EmbeddedComplex one({Point::Zero(2), Point::Unit(2, 0), Point::Unit(2, 1)},
                        {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}});
    ChainComplex c = ChainComplex::from(one);
    CycleClass boundary = make_cycle(c, one.vertices(), 1, {0, 1, 2});
    NullHomology nh = is_null_homologous(boundary, c);
    CHECK(nh.null);
    CHECK(nh.filling == std::vector<std::size_t>{0});

    EmbeddedComplex torus = fixtures::seven_vertex_torus();
    ChainComplex tc = ChainComplex::from(torus);
    std::vector<std::size_t> gen;
    for (int i = 0; i < 7; ++i)
        gen.push_back(*torus.find_edge(i, (i + 1) % 7));
    CycleClass g = make_cycle(tc, torus.vertices(), 1, gen);
    CHECK_FALSE(is_null_homologous(g, tc).null);

    std::vector<std::size_t> twice = gen;
    twice.insert(twice.end(), gen.begin(), gen.end());
    std::sort(twice.begin(), twice.end());
    std::vector<std::size_t> sum;   // Z/2 sum of two copies
    for (std::size_t i = 0; i < twice.size(); ++i)
        if ((i + 1 < twice.size() && twice[i] == twice[i + 1]) ||
            (i > 0 && twice[i] == twice[i - 1]))
            continue;
        else
            sum.push_back(twice[i]);
    CHECK(is_null_homologous(make_cycle(tc, torus.vertices(), 1, sum), tc).null);

    CHECK_THROWS_AS(make_cycle(tc, torus.vertices(), 1, {gen[0]}), InvalidArgument);
}

TEST_CASE("annotations agree with the reduction")
{
    EmbeddedComplex torus = fixtures::seven_vertex_torus();
    H1Annotation ann(torus);
    CHECK(ann.rank() == 2);
    ChainComplex tc = ChainComplex::from(torus);
    std::vector<int> gen;
    for (int i = 0; i < 7; ++i)
        gen.push_back(*torus.find_edge(i, (i + 1) % 7));
    CHECK_FALSE(H1Annotation::is_zero(ann.of_edges(gen)));
    for (const Triangle& t : torus.triangles()) {
        std::vector<int> e = {*torus.find_edge(t[0], t[1]), *torus.find_edge(t[1], t[2]),
                              *torus.find_edge(t[0], t[2])};
        CHECK(H1Annotation::is_zero(ann.of_edges(e)));
    }

    H1Annotation poly(fixtures::regular_polygon(16, 1.0));
    CHECK(poly.rank() == 1);
    H1Annotation oct(fixtures::octahedron());
    CHECK(oct.rank() == 0);
}

TEST_CASE("integer classes")
{
    EmbeddedComplex poly = fixtures::regular_polygon(12, 1.0);
    IntegerH1 h(poly);
    std::vector<int> seq;
    for (int i = 0; i <= 12; ++i)
        seq.push_back(i % 12);
    LoopPath gen = make_loop(poly, seq);
    auto g = h.of_loop(poly, gen);
    auto gg = h.of_loop(poly, concatenate_loops(gen, gen));
    REQUIRE(g.size() == 1);
    CHECK(std::abs(g[0]) == 1);
    CHECK(gg[0] == 2 * g[0]);
    CHECK(h.is_zero(h.of_loop(poly, concatenate_loops(gen, reversed(gen)))));
    CHECK(h.add(g, g) == gg);

    EmbeddedComplex torus = fixtures::seven_vertex_torus();
    IntegerH1 ht(torus);
    LoopPath a = make_loop(torus, {0, 1, 2, 3, 4, 5, 6, 0});
    LoopPath tri = make_loop(torus, {0, 1, 3, 0});
    CHECK_FALSE(ht.is_zero(ht.of_loop(torus, a)));
    CHECK(ht.is_zero(ht.of_loop(torus, tri)));
}

TEST_CASE("filling radius")
{
    EmbeddedComplex disk = fixtures::disk_mesh(6, 1.0);
    ChainComplex dc = ChainComplex::from(disk);
    // Boundary of the ring-2 hexagon around the centre.
    std::vector<int> ring;
    const double h = 1.0 / 6.0;
    for (std::size_t v = 0; v < disk.num_vertices(); ++v) {
        const Point& p = disk.vertex(static_cast<int>(v));
        const double hex = std::max({std::abs(p[1]) * 2.0 / std::sqrt(3.0),
                                     std::abs(p[0]) + std::abs(p[1]) / std::sqrt(3.0)});
        if (std::abs(hex - 2 * h) < 1e-9)
            ring.push_back(static_cast<int>(v));
    }
    REQUIRE(ring.size() == 12);
    std::vector<std::size_t> chain;
    for (const Edge& e : disk.edges())
        if (std::count(ring.begin(), ring.end(), e.a) && std::count(ring.begin(), ring.end(), e.b))
            chain.push_back(*disk.find_edge(e.a, e.b));
    REQUIRE(chain.size() == 12);
    CycleClass c = make_cycle(dc, disk.vertices(), 1, chain);
    const double r = filling_diameter(c, dc, disk.vertices());
    CHECK(r == brute_force_filling_radius(c, dc, disk.vertices()));
    // The centre must be included; its nearest ring vertex is a side midpoint.
    CHECK(r == Catch::Approx(std::sqrt(3.0) * h).epsilon(1e-9));

    const Triangle t0 = disk.triangles()[0];
    std::vector<std::size_t> t0_edges;
    for (auto [a, b] : {std::pair{t0[0], t0[1]}, std::pair{t0[1], t0[2]}, std::pair{t0[0], t0[2]}})
        t0_edges.push_back(static_cast<std::size_t>(*disk.find_edge(a, b)));
    CycleClass tri = make_cycle(dc, disk.vertices(), 1, t0_edges);
    CHECK(filling_diameter(tri, dc, disk.vertices()) <= h + 1e-12);

    EmbeddedComplex sphere = fixtures::geodesic_sphere(3);
    ChainComplex sc = ChainComplex::from(sphere);
    std::vector<std::size_t> equator;
    for (std::size_t e = 0; e < sphere.num_edges(); ++e) {
        const Edge& ed = sphere.edges()[e];
        if (std::abs(sphere.vertex(ed.a)[2]) < 1e-12 && std::abs(sphere.vertex(ed.b)[2]) < 1e-12)
            equator.push_back(e);
    }
    CycleClass eq = make_cycle(sc, sphere.vertices(), 1, equator);
    const double re = filling_diameter(eq, sc, sphere.vertices());
    CHECK(re == brute_force_filling_radius(eq, sc, sphere.vertices()));
    // Every filling contains a pole, which sits sqrt(2) from the equator.
    CHECK(re == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));

    EmbeddedComplex torus = fixtures::seven_vertex_torus();
    ChainComplex tc = ChainComplex::from(torus);
    std::vector<std::size_t> gen;
    for (int i = 0; i < 7; ++i)
        gen.push_back(*torus.find_edge(i, (i + 1) % 7));
    CHECK_THROWS_AS(filling_diameter(make_cycle(tc, torus.vertices(), 1, gen), tc,
                                     torus.vertices()),
                    NeverFills);
}
