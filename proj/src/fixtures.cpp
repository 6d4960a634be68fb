#include "lipsing/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "lipsing/errors.hpp"

namespace lipsing::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

Point p2(double x, double y)
{
    Point p(2);
    p << x, y;
    return p;
}

Point p3(double x, double y, double z)
{
    Point p(3);
    p << x, y, z;
    return p;
}

std::vector<std::pair<int, int>> triangle_edges(const std::vector<Triangle>& tris)
{
    std::vector<std::pair<int, int>> edges;
    for (const Triangle& t : tris) {
        edges.push_back({t[0], t[1]});
        edges.push_back({t[1], t[2]});
        edges.push_back({t[0], t[2]});
    }
    return edges;
}

struct Profile {
    PointSet points;
    std::vector<std::pair<int, int>> edges;
};

// Appends the points strictly after `from` and up to `to` along a circle
// arc, returning the index of the last point.
int append_arc(Profile& out, int from, Point center, double a0, double a1, int steps)
{
    int prev = from;
    for (int k = 1; k <= steps; ++k) {
        const double a = a0 + (a1 - a0) * k / steps;
        out.points.push_back(center + p2(std::cos(a), std::sin(a)));
        const int cur = static_cast<int>(out.points.size()) - 1;
        out.edges.push_back({prev, cur});
        prev = cur;
    }
    return prev;
}

int append_segment(Profile& out, int from, const Point& to, int steps)
{
    const Point start = out.points[from];
    int prev = from;
    for (int k = 1; k <= steps; ++k) {
        out.points.push_back(start + (to - start) * (static_cast<double>(k) / steps));
        const int cur = static_cast<int>(out.points.size()) - 1;
        out.edges.push_back({prev, cur});
        prev = cur;
    }
    return prev;
}

Profile pinched(double t, int per_circle)
{
    if (t < 0.0 || t >= 1.0)
        throw InvalidArgument("pinch parameter must lie in [0, 1)");
    if (per_circle < 8)
        throw InvalidArgument("need at least 8 samples per circle");
    Profile out;
    const double h = 2.0 * kPi / per_circle;
    const Point right = p2(1.0, 0.0);
    const Point left = p2(-1.0, 0.0);
    if (t == 0.0) {
        out.points.push_back(p2(0.0, 0.0));
        const int r_last = append_arc(out, 0, right, kPi, 3.0 * kPi - h, per_circle - 1);
        out.edges.push_back({r_last, 0});
        const int l_last = append_arc(out, 0, left, 0.0, 2.0 * kPi - h, per_circle - 1);
        out.edges.push_back({l_last, 0});
        return out;
    }
    const double a = std::asin(t);
    const int arc_steps = std::max(2, static_cast<int>(std::ceil(2.0 * (kPi - a) / h)));
    const double gap = 2.0 * (1.0 - std::cos(a));
    const int seg_steps = std::max(1, static_cast<int>(std::ceil(gap / h)));

    // Right arc from its upper end clockwise round to its lower end.
    out.points.push_back(right + p2(std::cos(kPi - a), std::sin(kPi - a)));
    int last = append_arc(out, 0, right, kPi - a, -kPi + a, arc_steps);
    last = append_segment(out, last, left + p2(std::cos(-a), std::sin(-a)), seg_steps);
    last = append_arc(out, last, left, -a, -2.0 * kPi + a, arc_steps);
    // Close along the upper segment.
    const Point start = out.points[0];
    const Point from = out.points[last];
    for (int k = 1; k < seg_steps; ++k) {
        out.points.push_back(from + (start - from) * (static_cast<double>(k) / seg_steps));
        const int cur = static_cast<int>(out.points.size()) - 1;
        out.edges.push_back({last, cur});
        last = cur;
    }
    out.edges.push_back({last, 0});
    return out;
}

}   // namespace

PointSet regular_polygon_points(int n, double radius)
{
    PointSet pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * kPi * i / n;
        pts.push_back(p2(radius * std::cos(a), radius * std::sin(a)));
    }
    return pts;
}

EmbeddedComplex regular_polygon(int n, double radius)
{
    return polygon_complex(regular_polygon_points(n, radius));
}

EmbeddedComplex octahedron()
{
    PointSet pts;
    for (int axis = 0; axis < 3; ++axis)
        for (double s : {1.0, -1.0}) {
            Point p = Point::Zero(3);
            p[axis] = s;
            pts.push_back(p);
        }
    std::vector<Triangle> tris;
    for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy)
            for (int sz = 0; sz < 2; ++sz)
                tris.push_back({sx, 2 + sy, 4 + sz});
    return EmbeddedComplex(pts, triangle_edges(tris), tris);
}

EmbeddedComplex seven_vertex_torus()
{
    PointSet pts;
    for (int i = 0; i < 7; ++i) {
        const double u = 2.0 * kPi * i / 7.0;
        const double v = 2.0 * kPi * 3.0 * i / 7.0;
        pts.push_back(p3((3.0 + std::cos(v)) * std::cos(u), (3.0 + std::cos(v)) * std::sin(u),
                         std::sin(v)));
    }
    std::vector<Triangle> tris;
    for (int i = 0; i < 7; ++i) {
        Triangle a{i, (i + 1) % 7, (i + 3) % 7};
        Triangle b{i, (i + 2) % 7, (i + 3) % 7};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        tris.push_back(a);
        tris.push_back(b);
    }
    return EmbeddedComplex(pts, triangle_edges(tris), tris);
}

EmbeddedComplex torus_grid(int minor, int major, double r, double R)
{
    PointSet pts;
    auto id = [&](int i, int j) { return ((i + minor) % minor) * major + (j + major) % major; };
    for (int i = 0; i < minor; ++i)
        for (int j = 0; j < major; ++j) {
            const double u = 2.0 * kPi * i / minor;
            const double v = 2.0 * kPi * j / major;
            pts.push_back(p3((R + r * std::cos(u)) * std::cos(v), (R + r * std::cos(u)) * std::sin(v),
                             r * std::sin(u)));
        }
    std::vector<Triangle> tris;
    for (int i = 0; i < minor; ++i)
        for (int j = 0; j < major; ++j) {
            Triangle a{id(i, j), id(i + 1, j), id(i + 1, j + 1)};
            Triangle b{id(i, j), id(i + 1, j + 1), id(i, j + 1)};
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            tris.push_back(a);
            tris.push_back(b);
        }
    return EmbeddedComplex(pts, triangle_edges(tris), tris);
}

EmbeddedComplex disk_mesh(int rings, double radius)
{
    const double h = radius / rings;
    std::map<std::pair<int, int>, int> index;
    PointSet pts;
    for (int q = -rings; q <= rings; ++q)
        for (int r = -rings; r <= rings; ++r)
            if (std::abs(q + r) <= rings) {
                index[{q, r}] = static_cast<int>(pts.size());
                pts.push_back(p2(h * (q + 0.5 * r), h * r * std::sqrt(3.0) / 2.0));
            }
    std::vector<Triangle> tris;
    auto add = [&](std::pair<int, int> a, std::pair<int, int> b, std::pair<int, int> c) {
        if (!index.count(a) || !index.count(b) || !index.count(c))
            return;
        Triangle t{index[a], index[b], index[c]};
        std::sort(t.begin(), t.end());
        tris.push_back(t);
    };
    for (int q = -rings; q <= rings; ++q)
        for (int r = -rings; r <= rings; ++r) {
            add({q, r}, {q + 1, r}, {q, r + 1});
            add({q + 1, r}, {q, r + 1}, {q + 1, r + 1});
        }
    return EmbeddedComplex(pts, triangle_edges(tris), tris);
}

ChainComplex real_projective_3space()
{
    // Faces of the cross-polytope as base-3 codes over four axes:
    // digit 0 = axis unused, 1 = +e_i, 2 = -e_i.
    auto antipode = [](int code) {
        int out = 0, scale = 1;
        for (int axis = 0; axis < 4; ++axis, code /= 3, scale *= 3) {
            const int d = code % 3;
            out += scale * (d == 0 ? 0 : 3 - d);
        }
        return out;
    };
    std::map<int, int> orbit;
    auto orbit_of = [&](int code) {
        const int key = std::min(code, antipode(code));
        auto it = orbit.find(key);
        if (it != orbit.end())
            return it->second;
        const int id = static_cast<int>(orbit.size());
        orbit[key] = id;
        return id;
    };

    std::set<Simplex> tets;
    const int pow3[4] = {1, 3, 9, 27};
    for (int signs = 0; signs < 16; ++signs) {
        int axes[4] = {0, 1, 2, 3};
        do {
            Simplex tet;
            int code = 0;
            for (int k = 0; k < 4; ++k) {
                const int axis = axes[k];
                code += pow3[axis] * (((signs >> axis) & 1) ? 2 : 1);
                tet.push_back(orbit_of(code));
            }
            std::sort(tet.begin(), tet.end());
            tets.insert(tet);
        } while (std::next_permutation(axes, axes + 4));
    }

    std::vector<std::set<Simplex>> faces(3);
    for (const Simplex& tet : tets)
        for (int mask = 1; mask < 16; ++mask) {
            Simplex s;
            for (int k = 0; k < 4; ++k)
                if (mask & (1 << k))
                    s.push_back(tet[k]);
            if (s.size() >= 2 && s.size() <= 3)
                faces[s.size() - 2].insert(s);
        }
    std::vector<std::vector<Simplex>> higher(3);
    higher[0].assign(faces[0].begin(), faces[0].end());
    higher[1].assign(faces[1].begin(), faces[1].end());
    higher[2].assign(tets.begin(), tets.end());
    return ChainComplex(orbit.size(), std::move(higher));
}

EmbeddedComplex geodesic_sphere(int levels)
{
    EmbeddedComplex base = octahedron();
    PointSet pts = base.vertices();
    std::vector<Triangle> tris = base.triangles();
    for (int level = 0; level < levels; ++level) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end())
                return it->second;
            pts.push_back((pts[a] + pts[b]).normalized());
            const int id = static_cast<int>(pts.size()) - 1;
            mid[key] = id;
            return id;
        };
        std::vector<Triangle> next;
        for (const Triangle& t : tris) {
            const int ab = midpoint(t[0], t[1]);
            const int bc = midpoint(t[1], t[2]);
            const int ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    for (Triangle& t : tris)
        std::sort(t.begin(), t.end());
    return EmbeddedComplex(pts, triangle_edges(tris), tris);
}

PointSet pinched_profile(double t, int per_circle)
{
    return pinched(t, per_circle).points;
}

EmbeddedComplex pinched_circles(double t, int per_circle)
{
    Profile p = pinched(t, per_circle);
    return EmbeddedComplex(std::move(p.points), p.edges);
}

EmbeddedComplex pinched_tori(double t, int per_circle, int around, double offset)
{
    if (offset <= 2.0)
        throw InvalidArgument("revolution axis must clear the profile");
    Profile prof = pinched(t, per_circle);
    const int m = static_cast<int>(prof.points.size());
    PointSet pts;
    for (int j = 0; j < around; ++j) {
        const double phi = 2.0 * kPi * j / around;
        for (const Point& q : prof.points) {
            const double rho = q[0] + offset;
            pts.push_back(p3(-offset + rho * std::cos(phi), q[1], rho * std::sin(phi)));
        }
    }
    auto id = [&](int v, int j) { return ((j + around) % around) * m + v; };
    std::vector<Triangle> tris;
    for (int j = 0; j < around; ++j)
        for (auto [a, b] : prof.edges) {
            Triangle x{id(a, j), id(b, j), id(b, j + 1)};
            Triangle y{id(a, j), id(b, j + 1), id(a, j + 1)};
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            tris.push_back(x);
            tris.push_back(y);
        }
    return EmbeddedComplex(std::move(pts), triangle_edges(tris), tris);
}

}   // namespace lipsing::fixtures
