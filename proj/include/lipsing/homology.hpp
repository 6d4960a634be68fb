#pragma once

/**
 * Simplicial chain complexes, Betti numbers over Z/2 and Z, null-homology
 * tests with filling chains, and first-homology annotations of edges.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipsing/metric_complex.hpp"

namespace lipsing {

enum class Ring { Z2, Z };

const char* to_string(Ring ring);

using Simplex = std::vector<int>;   // strictly increasing vertex indices

inline constexpr std::size_t kDefaultSimplexCap = 5'000'000;

class ChainComplex {
  public:
    ChainComplex() = default;

    /// `higher[d - 1]` lists the d-simplices for d >= 1.  Every face of every
    /// simplex must be present.  Throws InvalidComplex otherwise.
    ChainComplex(std::size_t num_vertices, std::vector<std::vector<Simplex>> higher);

    /// Same complex as `complex`; edges and triangles keep their indices.
    static ChainComplex from(const EmbeddedComplex& complex);

    int max_dim() const;
    std::size_t size(int dim) const;
    std::size_t total_size() const;
    Simplex simplex(int dim, std::size_t index) const;
    std::optional<std::size_t> index_of(const Simplex& s) const;

    /// Face indices of simplex `index` of dimension `dim` >= 1, ordered so
    /// that face i omits vertex i (its sign in the oriented boundary is
    /// (-1)^i).
    std::vector<std::size_t> faces(int dim, std::size_t index) const;

    /// Column-sparse Z/2 boundary matrix of dimension `dim`, rows sorted.
    std::vector<std::vector<std::size_t>> boundary_z2(int dim) const;

    /// True when the composition of consecutive boundary maps vanishes over Z.
    bool boundary_squared_zero() const;

  private:
    std::uint64_t key(const int* vertices, int count) const;

    std::size_t num_vertices_ = 0;
    std::vector<std::vector<int>> flat_;   // flat_[d-1]: (d+1) * size(d) ints
    std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>> lookup_;   // sorted by key
    std::vector<std::vector<std::uint64_t>> binom_;
};

struct BettiVector {
    Ring ring = Ring::Z2;
    std::vector<long long> betti;                  // b_0 .. b_d
    std::vector<std::vector<long long>> torsion;   // Z only; torsion[j] for H_j

    std::string describe() const;
};

/// Betti numbers b_0..b_{max_dim}.  The top entry counts cycles only, since
/// no higher simplices are present.
BettiVector betti(const ChainComplex& complex, Ring ring = Ring::Z2);

/// Z/2 cycle of dimension `dim` given by simplex indices.
struct CycleClass {
    int dim = 1;
    std::vector<std::size_t> chain;   // sorted, coefficients 1
    double support_diameter = 0.0;
};

/// Builds a cycle and records its support diameter.  Throws InvalidArgument
/// if the chain has nonzero boundary.
CycleClass make_cycle(const ChainComplex& complex, const PointSet& points, int dim,
                      std::vector<std::size_t> chain);

struct NullHomology {
    bool null = false;
    std::vector<std::size_t> filling;   // (dim + 1)-simplices, Z/2 coefficients
};

NullHomology is_null_homologous(const CycleClass& cycle, const ChainComplex& complex);

/// Z/2 cycles whose classes form a basis of H_dim (dim >= 1), from the
/// standard reduction of the boundary matrices in index order.  Exact when
/// the complex has simplices of dimension dim + 1.
std::vector<CycleClass> homology_basis(const ChainComplex& complex, const PointSet& points,
                                       int dim);

/// Smallest r such that the cycle bounds among the simplices whose vertices
/// all lie within Euclidean distance r of the cycle's support.  Throws
/// NeverFills when the cycle is not a boundary in the whole complex.
struct Filling {
    double radius = 0.0;
    double diameter = 0.0;   // support diameter of the filling chain found at `radius`
    std::vector<std::size_t> chain;
};

Filling filling(const CycleClass& cycle, const ChainComplex& complex, const PointSet& points);
double filling_diameter(const CycleClass& cycle, const ChainComplex& complex,
                        const PointSet& points);

/// All cliques of the graph up to `max_dim` as simplices.  Throws
/// SizeBudgetExceeded past `cap` simplices in total.
ChainComplex clique_complex(std::size_t num_vertices, const std::vector<std::pair<int, int>>& edges,
                            int max_dim, std::size_t cap = kDefaultSimplexCap);

struct RipsComplex {
    ChainComplex chain;
    EmbeddedComplex complex;   // 2-skeleton, same edge and triangle order
};

RipsComplex rips_complex(const PointSet& points, double radius, int max_dim,
                         std::size_t cap = kDefaultSimplexCap);

/// Builds the Rips complex on an explicit edge set (for filtered variants).
RipsComplex flag_complex(const PointSet& points, const std::vector<std::pair<int, int>>& edges,
                         int max_dim, std::size_t cap = kDefaultSimplexCap);

/**
 * Z/2 cohomology annotation of H_1: each edge carries a vector in
 * (Z/2)^{b_1} such that a 1-cycle is a boundary iff the sum of its edge
 * vectors is zero.
 */
class H1Annotation {
  public:
    using Class = std::vector<std::uint64_t>;

    explicit H1Annotation(const EmbeddedComplex& complex);

    int rank() const { return rank_; }
    const Class& edge(int e) const { return edge_[e]; }
    Class zero() const { return Class(words_, 0); }
    Class of_edges(const std::vector<int>& edges) const;
    Class of_loop(const EmbeddedComplex& complex, const LoopPath& loop) const;

    static void add(Class& into, const Class& other);
    static bool is_zero(const Class& c);

  private:
    int rank_ = 0;
    std::size_t words_ = 0;
    std::vector<Class> edge_;
};

/**
 * Integer first homology of a 2-complex, presented on the non-tree edges of
 * a spanning forest modulo triangle boundaries.  Classes are canonical
 * representatives, so two loops are homologous iff their classes are equal.
 */
class IntegerH1 {
  public:
    using Class = std::vector<long long>;

    /// Throws SizeBudgetExceeded when the relation matrix exceeds `max_entries`.
    explicit IntegerH1(const EmbeddedComplex& complex, std::size_t max_entries = 4'000'000);

    std::size_t num_generators() const { return nontree_.size(); }
    Class of_loop(const EmbeddedComplex& complex, const LoopPath& loop) const;
    Class reduce(Class v) const;
    Class add(const Class& a, const Class& b) const;
    bool is_zero(const Class& c) const;

  private:
    std::vector<int> coordinate_;   // edge -> non-tree coordinate or -1
    std::vector<int> nontree_;
    std::vector<std::vector<long long>> hnf_;   // echelon rows
    std::vector<int> pivot_col_;
};

/// Diagonal of a Smith normal form of a dense integer matrix (nonzero
/// entries only, sorted).  Throws SizeBudgetExceeded on overflow.
std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> matrix);

}   // namespace lipsing
