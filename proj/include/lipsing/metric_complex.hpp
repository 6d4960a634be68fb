#pragma once

/**
 * Embedded simplicial 2-complexes over point samples and their inner metric.
 *
 * An EmbeddedComplex is immutable once built.  Edge weights are the Euclidean
 * lengths of the edges, so graph distances overestimate the inner distance of
 * the sampled set and converge to it under densification.
 */

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipsing/common.hpp"

namespace lipsing {

struct Edge {
    int a = 0;   // a < b
    int b = 0;
    double weight = 0.0;
};

using Triangle = std::array<int, 3>;   // sorted vertex indices

class EmbeddedComplex {
  public:
    struct Incidence {
        int neighbor;
        int edge;
    };

    EmbeddedComplex() = default;

    /// Builds and validates the complex.  Edges are deduplicated and given
    /// Euclidean weights; every triangle must have its three edges present.
    /// Throws InvalidComplex on malformed input or duplicate vertices.
    EmbeddedComplex(PointSet vertices, const std::vector<std::pair<int, int>>& edges,
                    std::vector<Triangle> triangles = {});

    const PointSet& vertices() const { return vertices_; }
    const Point& vertex(int v) const { return vertices_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    int ambient_dim() const { return ambient_dim_; }

    std::span<const Incidence> incident(int v) const
    {
        return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
    }

    std::optional<int> find_edge(int a, int b) const;

    /// Connected-component label per vertex (labels are 0..k-1 in order of
    /// first appearance).
    const std::vector<int>& component_labels() const { return components_; }
    int num_components() const { return num_components_; }
    bool connected() const { return num_components_ <= 1; }

  private:
    PointSet vertices_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<std::size_t> offsets_;
    std::vector<Incidence> incidences_;
    std::vector<int> components_;
    int num_components_ = 0;
    int ambient_dim_ = 0;
};

struct GeodesicPath {
    std::vector<int> vertices;
    double length = 0.0;
};

/// Closed edge path; vertices.front() == vertices.back() is the basepoint.
/// The constant loop is the single-vertex sequence.
struct LoopPath {
    std::vector<int> vertices;
    double length = 0.0;

    int basepoint() const { return vertices.front(); }
    bool is_constant() const { return vertices.size() <= 1; }
};

/// Dijkstra output rooted at `source`.  parent[source] == -1; unreachable
/// vertices (or those beyond the cutoff) keep distance = +inf.
struct ShortestPathTree {
    int source = -1;
    std::vector<double> distance;
    std::vector<int> parent;
    std::vector<int> parent_edge;

    std::vector<int> path_to(int target) const;   // source ... target
};

/// Optional per-edge weights replacing the Euclidean edge lengths.
using EdgeWeights = std::span<const double>;

ShortestPathTree shortest_path_tree(const EmbeddedComplex& complex, int source,
                                    double cutoff = kInfinity, EdgeWeights weights = {});

/// Minimal-length edge path between two vertices.  Throws DisconnectedPair.
GeodesicPath shortest_path(const EmbeddedComplex& complex, int a, int b);

/// All-pairs inner distances.  Throws DisconnectedComplex when some pair has
/// no connecting path.
Eigen::MatrixXd inner_distance_matrix(const EmbeddedComplex& complex);

/// Builds a loop from a closed vertex sequence, checking edge-connectedness.
LoopPath make_loop(const EmbeddedComplex& complex, std::vector<int> vertices);

/// Edge indices traversed by the loop, in order.
std::vector<int> loop_edges(const EmbeddedComplex& complex, const LoopPath& loop);

LoopPath reversed(const LoopPath& loop);

/// Loop product l1 · l2.  Throws BasepointMismatch.
LoopPath concatenate_loops(const LoopPath& l1, const LoopPath& l2);

/// Decides whether the candidate edge (a, b) is admissible.
using EdgeFilter = std::function<bool(int, int)>;

/// Symmetrized k-nearest-neighbor graph (brute force), optionally filtered and
/// completed with its 3-cliques as triangles.
EmbeddedComplex knn_complex(const PointSet& points, int k = 12, bool with_triangles = false,
                            const EdgeFilter& filter = {});

/// All pairs within `radius`, optionally filtered, with 3-cliques as
/// triangles when requested.
EmbeddedComplex radius_complex(const PointSet& points, double radius, bool with_triangles,
                               const EdgeFilter& filter = {});

/// 3-cliques of the graph given by the edge list.
std::vector<Triangle> flag_triangles(std::size_t num_vertices,
                                     const std::vector<std::pair<int, int>>& edges);

/// Closed polygon through the given points in order.
EmbeddedComplex polygon_complex(const PointSet& points);

}   // namespace lipsing
