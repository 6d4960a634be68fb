#include "lipsing/metric_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "lipsing/errors.hpp"
#include "lipsing/parallel.hpp"

namespace lipsing {

namespace {

std::pair<int, int> ordered(int a, int b)
{
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void check_duplicate_vertices(const PointSet& vertices)
{
    // Sweep along the first coordinate; only points within the tolerance in
    // that coordinate can coincide.
    if (vertices.size() < 2)
        return;
    std::vector<int> order(vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return vertices[i][0] < vertices[j][0]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Point& p = vertices[order[i]];
            const Point& q = vertices[order[j]];
            if (q[0] - p[0] > kDuplicateTol)
                break;
            if ((p - q).norm() <= kDuplicateTol)
                throw InvalidComplex("duplicate vertices " + std::to_string(order[i]) + " and " +
                                     std::to_string(order[j]));
        }
    }
}

}   // namespace

EmbeddedComplex::EmbeddedComplex(PointSet vertices, const std::vector<std::pair<int, int>>& edges,
                                 std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const int n = static_cast<int>(vertices_.size());
    ambient_dim_ = n > 0 ? static_cast<int>(vertices_.front().size()) : 0;
    for (const Point& p : vertices_)
        if (p.size() != ambient_dim_)
            throw InvalidComplex("vertices have mixed ambient dimension");
    check_duplicate_vertices(vertices_);

    std::vector<std::pair<int, int>> sorted;
    sorted.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw InvalidComplex("edge endpoint out of range");
        if (a == b)
            throw InvalidComplex("self-loop edge at vertex " + std::to_string(a));
        sorted.push_back(ordered(a, b));
    }
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    edges_.reserve(sorted.size());
    for (auto [a, b] : sorted)
        edges_.push_back({a, b, (vertices_[a] - vertices_[b]).norm()});

    // CSR adjacency, neighbors sorted by index.
    offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (int v = 0; v < n; ++v)
        offsets_[v + 1] += offsets_[v];
    incidences_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
        incidences_[fill[edges_[i].a]++] = {edges_[i].b, i};
        incidences_[fill[edges_[i].b]++] = {edges_[i].a, i};
    }
    for (int v = 0; v < n; ++v)
        std::sort(incidences_.begin() + offsets_[v], incidences_.begin() + offsets_[v + 1],
                  [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });

    for (Triangle& t : triangles_) {
        std::sort(t.begin(), t.end());
        if (t[0] < 0 || t[2] >= n || t[0] == t[1] || t[1] == t[2])
            throw InvalidComplex("degenerate or out-of-range triangle");
        if (!find_edge(t[0], t[1]) || !find_edge(t[1], t[2]) || !find_edge(t[0], t[2]))
            throw InvalidComplex("triangle (" + std::to_string(t[0]) + "," + std::to_string(t[1]) +
                                 "," + std::to_string(t[2]) + ") lacks an edge");
    }
    std::sort(triangles_.begin(), triangles_.end());
    triangles_.erase(std::unique(triangles_.begin(), triangles_.end()), triangles_.end());

    components_.assign(n, -1);
    num_components_ = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (components_[s] >= 0)
            continue;
        components_[s] = num_components_;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const Incidence& inc : incident(v)) {
                if (components_[inc.neighbor] < 0) {
                    components_[inc.neighbor] = num_components_;
                    stack.push_back(inc.neighbor);
                }
            }
        }
        ++num_components_;
    }
}

std::optional<int> EmbeddedComplex::find_edge(int a, int b) const
{
    if (a < 0 || b < 0 || a >= static_cast<int>(vertices_.size()) ||
        b >= static_cast<int>(vertices_.size()))
        return std::nullopt;
    auto range = incident(a);
    auto it = std::lower_bound(range.begin(), range.end(), b,
                               [](const Incidence& inc, int key) { return inc.neighbor < key; });
    if (it != range.end() && it->neighbor == b)
        return it->edge;
    return std::nullopt;
}

std::vector<int> ShortestPathTree::path_to(int target) const
{
    std::vector<int> path;
    if (target < 0 || target >= static_cast<int>(distance.size()) || !std::isfinite(distance[target]))
        return path;
    for (int v = target; v >= 0; v = parent[v])
        path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

ShortestPathTree shortest_path_tree(const EmbeddedComplex& complex, int source, double cutoff,
                                    EdgeWeights weights)
{
    const std::size_t n = complex.num_vertices();
    ShortestPathTree tree;
    tree.source = source;
    tree.distance.assign(n, kInfinity);
    tree.parent.assign(n, -1);
    tree.parent_edge.assign(n, -1);
    if (source < 0 || source >= static_cast<int>(n))
        throw InvalidArgument("source vertex out of range");

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    tree.distance[source] = 0.0;
    heap.push({0.0, source});
    const auto& edges = complex.edges();
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > tree.distance[v])
            continue;
        if (d > cutoff)
            break;
        for (const auto& inc : complex.incident(v)) {
            const double w = weights.empty() ? edges[inc.edge].weight : weights[inc.edge];
            const double nd = d + w;
            // Ties go to the lower-index parent so trees are reproducible.
            if (nd < tree.distance[inc.neighbor] ||
                (nd == tree.distance[inc.neighbor] && v < tree.parent[inc.neighbor])) {
                const bool improved = nd < tree.distance[inc.neighbor];
                tree.distance[inc.neighbor] = nd;
                tree.parent[inc.neighbor] = v;
                tree.parent_edge[inc.neighbor] = inc.edge;
                if (improved)
                    heap.push({nd, inc.neighbor});
            }
        }
    }
    if (std::isfinite(cutoff)) {
        for (std::size_t v = 0; v < n; ++v) {
            if (tree.distance[v] > cutoff) {
                tree.distance[v] = kInfinity;
                tree.parent[v] = -1;
                tree.parent_edge[v] = -1;
            }
        }
    }
    return tree;
}

GeodesicPath shortest_path(const EmbeddedComplex& complex, int a, int b)
{
    const int n = static_cast<int>(complex.num_vertices());
    if (a < 0 || b < 0 || a >= n || b >= n)
        throw InvalidArgument("vertex out of range");
    if (complex.component_labels()[a] != complex.component_labels()[b])
        throw DisconnectedPair("vertices " + std::to_string(a) + " and " + std::to_string(b) +
                               " lie in different components");
    if (a == b)
        return {{a}, 0.0};
    ShortestPathTree tree = shortest_path_tree(complex, a);
    return {tree.path_to(b), tree.distance[b]};
}

Eigen::MatrixXd inner_distance_matrix(const EmbeddedComplex& complex)
{
    const std::size_t n = complex.num_vertices();
    if (!complex.connected())
        throw DisconnectedComplex("complex has " + std::to_string(complex.num_components()) +
                                  " components");
    Eigen::MatrixXd dist(n, n);
    parallel_for(n, [&](std::size_t s) {
        ShortestPathTree tree = shortest_path_tree(complex, static_cast<int>(s));
        for (std::size_t t = 0; t < n; ++t)
            dist(s, t) = tree.distance[t];
    });
    // Symmetrize against floating-point summation order.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist(i, j) = dist(j, i) = std::min(dist(i, j), dist(j, i));
    return dist;
}

LoopPath make_loop(const EmbeddedComplex& complex, std::vector<int> vertices)
{
    if (vertices.empty())
        throw InvalidArgument("loop needs at least one vertex");
    if (vertices.size() > 1 && vertices.front() != vertices.back())
        throw InvalidArgument("loop must end at its basepoint");
    LoopPath loop;
    loop.vertices = std::move(vertices);
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        auto e = complex.find_edge(loop.vertices[i], loop.vertices[i + 1]);
        if (!e)
            throw InvalidArgument("loop vertices " + std::to_string(loop.vertices[i]) + " and " +
                                  std::to_string(loop.vertices[i + 1]) + " share no edge");
        loop.length += complex.edges()[*e].weight;
    }
    if (loop.vertices.size() == 2)   // v -> v is the constant loop
        loop.vertices.resize(1);
    return loop;
}

std::vector<int> loop_edges(const EmbeddedComplex& complex, const LoopPath& loop)
{
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        auto e = complex.find_edge(loop.vertices[i], loop.vertices[i + 1]);
        if (!e)
            throw InvalidArgument("loop is not an edge path of this complex");
        out.push_back(*e);
    }
    return out;
}

LoopPath reversed(const LoopPath& loop)
{
    LoopPath out = loop;
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

LoopPath concatenate_loops(const LoopPath& l1, const LoopPath& l2)
{
    if (l1.vertices.empty() || l2.vertices.empty())
        throw InvalidArgument("empty loop");
    if (l1.basepoint() != l2.basepoint())
        throw BasepointMismatch("loops based at " + std::to_string(l1.basepoint()) + " and " +
                                std::to_string(l2.basepoint()));
    if (l1.is_constant())
        return l2;
    if (l2.is_constant())
        return l1;
    LoopPath out;
    out.vertices = l1.vertices;
    out.vertices.insert(out.vertices.end(), l2.vertices.begin() + 1, l2.vertices.end());
    out.length = l1.length + l2.length;
    return out;
}

std::vector<Triangle> flag_triangles(std::size_t num_vertices,
                                     const std::vector<std::pair<int, int>>& edges)
{
    std::vector<std::vector<int>> upper(num_vertices);
    for (auto [a, b] : edges) {
        auto [lo, hi] = ordered(a, b);
        upper[lo].push_back(hi);
    }
    for (auto& list : upper) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    std::vector<Triangle> out;
    std::vector<int> common;
    for (std::size_t a = 0; a < num_vertices; ++a) {
        for (int b : upper[a]) {
            common.clear();
            std::set_intersection(upper[a].begin(), upper[a].end(), upper[b].begin(),
                                  upper[b].end(), std::back_inserter(common));
            for (int c : common)
                out.push_back({static_cast<int>(a), b, c});
        }
    }
    return out;
}

EmbeddedComplex knn_complex(const PointSet& points, int k, bool with_triangles,
                            const EdgeFilter& filter)
{
    const std::size_t n = points.size();
    std::vector<std::vector<int>> nearest(n);
    parallel_for(n, [&](std::size_t i) {
        std::vector<std::pair<double, int>> cand;
        cand.reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                cand.push_back({(points[i] - points[j]).squaredNorm(), static_cast<int>(j)});
        const std::size_t kk = std::min<std::size_t>(k, cand.size());
        std::partial_sort(cand.begin(), cand.begin() + kk, cand.end());
        for (std::size_t r = 0; r < kk; ++r)
            nearest[i].push_back(cand[r].second);
    });

    std::vector<std::pair<int, int>> candidates;
    for (std::size_t i = 0; i < n; ++i)
        for (int j : nearest[i])
            candidates.push_back(ordered(static_cast<int>(i), j));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<std::pair<int, int>> edges;
    if (filter) {
        std::vector<char> keep(candidates.size(), 0);
        parallel_for(candidates.size(), [&](std::size_t e) {
            keep[e] = filter(candidates[e].first, candidates[e].second) ? 1 : 0;
        });
        for (std::size_t e = 0; e < candidates.size(); ++e)
            if (keep[e])
                edges.push_back(candidates[e]);
    } else {
        edges = std::move(candidates);
    }
    std::vector<Triangle> triangles;
    if (with_triangles)
        triangles = flag_triangles(n, edges);
    return EmbeddedComplex(points, edges, std::move(triangles));
}

EmbeddedComplex radius_complex(const PointSet& points, double radius, bool with_triangles,
                               const EdgeFilter& filter)
{
    const std::size_t n = points.size();
    std::vector<std::pair<int, int>> candidates;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((points[i] - points[j]).squaredNorm() <= r2)
                candidates.push_back({static_cast<int>(i), static_cast<int>(j)});
    std::vector<std::pair<int, int>> edges;
    if (filter) {
        std::vector<char> keep(candidates.size(), 0);
        parallel_for(candidates.size(), [&](std::size_t e) {
            keep[e] = filter(candidates[e].first, candidates[e].second) ? 1 : 0;
        });
        for (std::size_t e = 0; e < candidates.size(); ++e)
            if (keep[e])
                edges.push_back(candidates[e]);
    } else {
        edges = std::move(candidates);
    }
    std::vector<Triangle> triangles;
    if (with_triangles)
        triangles = flag_triangles(n, edges);
    return EmbeddedComplex(points, edges, std::move(triangles));
}

EmbeddedComplex polygon_complex(const PointSet& points)
{
    const int n = static_cast<int>(points.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n && n > 1; ++i)
        if (n > 2 || i == 0)
            edges.push_back({i, (i + 1) % n});
    return EmbeddedComplex(points, edges);
}

}   // namespace lipsing
