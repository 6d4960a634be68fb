#include "lipsing/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "lipsing/errors.hpp"

namespace lipsing {

const char* to_string(Ring ring)
{
    return ring == Ring::Z2 ? "z2" : "z";
}

namespace {

using Column = std::vector<std::size_t>;

void add_column(Column& target, const Column& source, Column& scratch)
{
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

long long checked_mul(long long a, long long b)
{
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw SizeBudgetExceeded("integer overflow in normal form computation");
    return r;
}

long long checked_sub(long long a, long long b)
{
    long long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw SizeBudgetExceeded("integer overflow in normal form computation");
    return r;
}

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

double support_diameter(const ChainComplex& complex, const PointSet& points, int dim,
                        const std::vector<std::size_t>& chain)
{
    std::vector<int> verts;
    for (std::size_t s : chain) {
        Simplex sx = complex.simplex(dim, s);
        verts.insert(verts.end(), sx.begin(), sx.end());
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    double best = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            best = std::max(best, (points[verts[i]] - points[verts[j]]).norm());
    return best;
}

// Z/2 solve of boundary(x) = z using the admissible (dim+1)-simplices.
std::optional<Column> solve_boundary(const ChainComplex& complex, int dim, const Column& z,
                                     const std::vector<char>* admissible)
{
    if (z.empty())
        return Column{};
    if (dim + 1 > complex.max_dim())
        return std::nullopt;
    const std::size_t rows = complex.size(dim);
    const std::size_t cols = complex.size(dim + 1);
    std::vector<long long> pivot_of_row(rows, -1);
    std::vector<Column> reduced;
    std::vector<Column> combo;
    Column scratch;
    for (std::size_t j = 0; j < cols; ++j) {
        if (admissible && !(*admissible)[j])
            continue;
        Column col = complex.faces(dim + 1, j);
        std::sort(col.begin(), col.end());
        Column v{j};
        while (!col.empty() && pivot_of_row[col.back()] >= 0) {
            const auto p = static_cast<std::size_t>(pivot_of_row[col.back()]);
            add_column(col, reduced[p], scratch);
            add_column(v, combo[p], scratch);
        }
        if (!col.empty()) {
            pivot_of_row[col.back()] = static_cast<long long>(reduced.size());
            reduced.push_back(std::move(col));
            combo.push_back(std::move(v));
        }
    }
    Column rest = z;
    Column x;
    while (!rest.empty() && pivot_of_row[rest.back()] >= 0) {
        const auto p = static_cast<std::size_t>(pivot_of_row[rest.back()]);
        add_column(rest, reduced[p], scratch);
        add_column(x, combo[p], scratch);
    }
    if (!rest.empty())
        return std::nullopt;
    return x;
}

std::vector<long long> invariant_factors(std::vector<long long> d)
{
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const long long g = std::gcd(d[i], d[j]);
            const long long l = checked_mul(d[i] / g, d[j]);
            d[i] = g;
            d[j] = l;
        }
    std::vector<long long> out;
    for (long long x : d)
        if (x > 1)
            out.push_back(x);
    return out;
}

}   // namespace

ChainComplex::ChainComplex(std::size_t num_vertices, std::vector<std::vector<Simplex>> higher)
    : num_vertices_(num_vertices)
{
    while (!higher.empty() && higher.back().empty())
        higher.pop_back();
    const int top = static_cast<int>(higher.size());
    binom_.assign(top + 2, std::vector<std::uint64_t>(num_vertices_ + 1, 0));
    for (int k = 0; k <= top + 1; ++k) {
        for (std::size_t n = 0; n <= num_vertices_; ++n) {
            if (k == 0) {
                binom_[k][n] = 1;
                continue;
            }
            if (n == 0)
                continue;
            unsigned __int128 v = static_cast<unsigned __int128>(binom_[k][n - 1]) + binom_[k - 1][n - 1];
            if (v > std::numeric_limits<std::uint64_t>::max())
                throw SizeBudgetExceeded("simplex keys overflow for this many vertices");
            binom_[k][n] = static_cast<std::uint64_t>(v);
        }
    }

    flat_.resize(top);
    lookup_.resize(top);
    for (int d = 1; d <= top; ++d) {
        auto& list = higher[d - 1];
        auto& flat = flat_[d - 1];
        auto& lookup = lookup_[d - 1];
        flat.reserve(list.size() * (d + 1));
        lookup.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Simplex& s = list[i];
            if (static_cast<int>(s.size()) != d + 1)
                throw InvalidComplex("simplex of wrong size in dimension " + std::to_string(d));
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] < 0 || static_cast<std::size_t>(s[k]) >= num_vertices_)
                    throw InvalidComplex("simplex vertex out of range");
                if (k > 0 && s[k] <= s[k - 1])
                    throw InvalidComplex("simplex vertices must be strictly increasing");
            }
            flat.insert(flat.end(), s.begin(), s.end());
            lookup.push_back({key(s.data(), d + 1), i});
        }
        std::sort(lookup.begin(), lookup.end());
        for (std::size_t i = 1; i < lookup.size(); ++i)
            if (lookup[i].first == lookup[i - 1].first)
                throw InvalidComplex("duplicate simplex in dimension " + std::to_string(d));
    }
    for (int d = 2; d <= top; ++d) {
        const auto& list = higher[d - 1];
        Simplex face(d);
        for (const Simplex& s : list) {
            for (int omit = 0; omit <= d; ++omit) {
                int w = 0;
                for (int k = 0; k <= d; ++k)
                    if (k != omit)
                        face[w++] = s[k];
                if (!index_of(face))
                    throw InvalidComplex("missing face of a " + std::to_string(d) + "-simplex");
            }
        }
    }
}

ChainComplex ChainComplex::from(const EmbeddedComplex& complex)
{
    std::vector<std::vector<Simplex>> higher(2);
    for (const Edge& e : complex.edges())
        higher[0].push_back({e.a, e.b});
    for (const Triangle& t : complex.triangles())
        higher[1].push_back({t[0], t[1], t[2]});
    return ChainComplex(complex.num_vertices(), std::move(higher));
}

std::uint64_t ChainComplex::key(const int* vertices, int count) const
{
    std::uint64_t k = 0;
    for (int i = 0; i < count; ++i)
        k += binom_[i + 1][vertices[i]];
    return k;
}

int ChainComplex::max_dim() const
{
    if (!flat_.empty())
        return static_cast<int>(flat_.size());
    return num_vertices_ > 0 ? 0 : -1;
}

std::size_t ChainComplex::size(int dim) const
{
    if (dim == 0)
        return num_vertices_;
    if (dim < 0 || dim > static_cast<int>(flat_.size()))
        return 0;
    return flat_[dim - 1].size() / (dim + 1);
}

std::size_t ChainComplex::total_size() const
{
    std::size_t n = num_vertices_;
    for (int d = 1; d <= static_cast<int>(flat_.size()); ++d)
        n += size(d);
    return n;
}

Simplex ChainComplex::simplex(int dim, std::size_t index) const
{
    if (dim == 0)
        return {static_cast<int>(index)};
    const int* p = flat_[dim - 1].data() + index * (dim + 1);
    return Simplex(p, p + dim + 1);
}

std::optional<std::size_t> ChainComplex::index_of(const Simplex& s) const
{
    const int d = static_cast<int>(s.size()) - 1;
    if (d == 0)
        return (s[0] >= 0 && static_cast<std::size_t>(s[0]) < num_vertices_)
                   ? std::optional<std::size_t>(s[0])
                   : std::nullopt;
    if (d < 1 || d > static_cast<int>(flat_.size()))
        return std::nullopt;
    for (int v : s)
        if (v < 0 || static_cast<std::size_t>(v) >= num_vertices_)
            return std::nullopt;
    const std::uint64_t k = key(s.data(), d + 1);
    const auto& lookup = lookup_[d - 1];
    auto it = std::lower_bound(lookup.begin(), lookup.end(), std::make_pair(k, std::size_t{0}));
    if (it == lookup.end() || it->first != k)
        return std::nullopt;
    return it->second;
}

std::vector<std::size_t> ChainComplex::faces(int dim, std::size_t index) const
{
    std::vector<std::size_t> out(dim + 1);
    const int* p = flat_[dim - 1].data() + index * (dim + 1);
    if (dim == 1) {
        out[0] = p[1];
        out[1] = p[0];
        return out;
    }
    int face[8];
    for (int omit = 0; omit <= dim; ++omit) {
        int w = 0;
        for (int k = 0; k <= dim; ++k)
            if (k != omit)
                face[w++] = p[k];
        const std::uint64_t k = key(face, dim);
        const auto& lookup = lookup_[dim - 2];
        auto it = std::lower_bound(lookup.begin(), lookup.end(), std::make_pair(k, std::size_t{0}));
        out[omit] = it->second;
    }
    return out;
}

std::vector<std::vector<std::size_t>> ChainComplex::boundary_z2(int dim) const
{
    std::vector<std::vector<std::size_t>> cols(size(dim));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        cols[j] = faces(dim, j);
        std::sort(cols[j].begin(), cols[j].end());
    }
    return cols;
}

bool ChainComplex::boundary_squared_zero() const
{
    for (int d = 2; d <= max_dim(); ++d) {
        for (std::size_t j = 0; j < size(d); ++j) {
            std::vector<std::pair<std::size_t, long long>> acc;
            auto f = faces(d, j);
            for (int i = 0; i <= d; ++i) {
                const long long si = (i % 2 == 0) ? 1 : -1;
                auto g = faces(d - 1, f[i]);
                for (int k = 0; k < d; ++k)
                    acc.push_back({g[k], si * ((k % 2 == 0) ? 1 : -1)});
            }
            std::sort(acc.begin(), acc.end());
            for (std::size_t a = 0; a < acc.size();) {
                long long sum = 0;
                std::size_t b = a;
                for (; b < acc.size() && acc[b].first == acc[a].first; ++b)
                    sum += acc[b].second;
                if (sum != 0)
                    return false;
                a = b;
            }
        }
    }
    return true;
}

std::string BettiVector::describe() const
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < betti.size(); ++i)
        os << (i ? "," : "") << betti[i];
    os << ") over " << to_string(ring);
    for (std::size_t j = 0; j < torsion.size(); ++j)
        for (long long t : torsion[j])
            os << " + Z/" << t << " in H" << j;
    return os.str();
}

std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> a)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    std::vector<long long> diag;
    std::size_t t = 0;
    while (t < std::min(m, n)) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        std::size_t pi = m, pj = n;
        long long best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pi = i;
                    pj = j;
                    if (best == 1)
                        goto found;
                }
    found:
        if (best == 0)
            break;
        std::swap(a[t], a[pi]);
        for (std::size_t i = 0; i < m; ++i)
            std::swap(a[i][t], a[i][pj]);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0)
                    continue;
                const long long q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < n; ++j)
                    if (a[t][j] != 0)
                        a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
                if (a[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0)
                    continue;
                const long long q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < m; ++i)
                    if (a[i][t] != 0)
                        a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
                if (a[t][j] != 0)
                    clean = false;
            }
            if (clean)
                break;
            // Move the smallest remainder in the pivot row or column into place.
            std::size_t bi = t, bj = t;
            long long b = std::llabs(a[t][t]);
            for (std::size_t i = t + 1; i < m; ++i)
                if (a[i][t] != 0 && std::llabs(a[i][t]) < b) {
                    b = std::llabs(a[i][t]);
                    bi = i;
                    bj = t;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (a[t][j] != 0 && std::llabs(a[t][j]) < b) {
                    b = std::llabs(a[t][j]);
                    bi = t;
                    bj = j;
                }
            if (bi != t)
                std::swap(a[t], a[bi]);
            if (bj != t)
                for (std::size_t i = 0; i < m; ++i)
                    std::swap(a[i][t], a[i][bj]);
        }
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

BettiVector betti(const ChainComplex& complex, Ring ring)
{
    BettiVector out;
    out.ring = ring;
    const int top = complex.max_dim();
    if (top < 0)
        return out;
    std::vector<long long> rank(top + 2, 0);
    std::vector<std::vector<long long>> divisors(top + 2);

    if (ring == Ring::Z2) {
        // Top-down reduction; a pivot row of d+1 is a column of d that reduces to zero.
        std::vector<char> cleared;
        for (int d = top; d >= 1; --d) {
            const std::size_t rows = complex.size(d - 1);
            const std::size_t cols = complex.size(d);
            std::vector<long long> pivot_of_row(rows, -1);
            std::vector<Column> reduced(cols);
            Column scratch;
            long long r = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                if (!cleared.empty() && cleared[j])
                    continue;
                Column col = complex.faces(d, j);
                std::sort(col.begin(), col.end());
                while (!col.empty() && pivot_of_row[col.back()] >= 0)
                    add_column(col, reduced[pivot_of_row[col.back()]], scratch);
                if (!col.empty()) {
                    pivot_of_row[col.back()] = static_cast<long long>(j);
                    reduced[j] = std::move(col);
                    ++r;
                }
            }
            rank[d] = r;
            cleared.assign(rows, 0);
            for (std::size_t i = 0; i < rows; ++i)
                if (pivot_of_row[i] >= 0)
                    cleared[i] = 1;
        }
    } else {
        constexpr std::size_t kMaxDense = 4'000'000;
        for (int d = 1; d <= top; ++d) {
            const std::size_t rows = complex.size(d - 1);
            const std::size_t cols = complex.size(d);
            if (rows * cols > kMaxDense)
                throw SizeBudgetExceeded("boundary matrix in dimension " + std::to_string(d) +
                                         " too large for the integer normal form");
            std::vector<std::vector<long long>> m(rows, std::vector<long long>(cols, 0));
            for (std::size_t j = 0; j < cols; ++j) {
                auto f = complex.faces(d, j);
                for (int i = 0; i <= d; ++i)
                    m[f[i]][j] += (i % 2 == 0) ? 1 : -1;
            }
            auto diag = smith_diagonal(std::move(m));
            rank[d] = static_cast<long long>(diag.size());
            divisors[d] = invariant_factors(diag);
        }
    }

    out.betti.resize(top + 1);
    for (int d = 0; d <= top; ++d)
        out.betti[d] = static_cast<long long>(complex.size(d)) - rank[d] - rank[d + 1];
    if (ring == Ring::Z) {
        out.torsion.resize(top + 1);
        for (int d = 0; d < top; ++d)
            out.torsion[d] = divisors[d + 1];
    }
    return out;
}

CycleClass make_cycle(const ChainComplex& complex, const PointSet& points, int dim,
                      std::vector<std::size_t> chain)
{
    std::sort(chain.begin(), chain.end());
    chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    if (dim >= 1) {
        std::vector<std::size_t> faces;
        for (std::size_t s : chain) {
            if (s >= complex.size(dim))
                throw InvalidArgument("chain simplex index out of range");
            auto f = complex.faces(dim, s);
            faces.insert(faces.end(), f.begin(), f.end());
        }
        std::sort(faces.begin(), faces.end());
        for (std::size_t i = 0; i < faces.size();) {
            std::size_t j = i;
            while (j < faces.size() && faces[j] == faces[i])
                ++j;
            if ((j - i) % 2 != 0)
                throw InvalidArgument("chain is not a cycle");
            i = j;
        }
    }
    CycleClass c;
    c.dim = dim;
    c.chain = std::move(chain);
    c.support_diameter = support_diameter(complex, points, dim, c.chain);
    return c;
}

NullHomology is_null_homologous(const CycleClass& cycle, const ChainComplex& complex)
{
    NullHomology out;
    auto x = solve_boundary(complex, cycle.dim, cycle.chain, nullptr);
    if (x) {
        out.null = true;
        out.filling = std::move(*x);
    }
    return out;
}

std::vector<CycleClass> homology_basis(const ChainComplex& complex, const PointSet& points,
                                       int dim)
{
    if (dim < 1 || dim > complex.max_dim())
        throw InvalidArgument("homology basis dimension out of range");
    Column scratch;
    // Kernel of the boundary in dimension dim, with the creating simplex.
    std::vector<std::pair<std::size_t, Column>> cycles;
    {
        std::vector<long long> pivot_of_row(complex.size(dim - 1), -1);
        std::vector<Column> reduced, combo;
        for (std::size_t j = 0; j < complex.size(dim); ++j) {
            Column col = complex.faces(dim, j);
            std::sort(col.begin(), col.end());
            Column v{j};
            while (!col.empty() && pivot_of_row[col.back()] >= 0) {
                const auto p = static_cast<std::size_t>(pivot_of_row[col.back()]);
                add_column(col, reduced[p], scratch);
                add_column(v, combo[p], scratch);
            }
            if (col.empty()) {
                cycles.emplace_back(j, std::move(v));
            } else {
                pivot_of_row[col.back()] = static_cast<long long>(reduced.size());
                reduced.push_back(std::move(col));
                combo.push_back(std::move(v));
            }
        }
    }
    // Simplices of dimension dim that are pivots of the next boundary die.
    std::vector<char> paired(complex.size(dim), 0);
    if (dim + 1 <= complex.max_dim()) {
        std::vector<long long> pivot_of_row(complex.size(dim), -1);
        std::vector<Column> reduced;
        for (std::size_t j = 0; j < complex.size(dim + 1); ++j) {
            Column col = complex.faces(dim + 1, j);
            std::sort(col.begin(), col.end());
            while (!col.empty() && pivot_of_row[col.back()] >= 0)
                add_column(col, reduced[pivot_of_row[col.back()]], scratch);
            if (!col.empty()) {
                pivot_of_row[col.back()] = static_cast<long long>(reduced.size());
                paired[col.back()] = 1;
                reduced.push_back(std::move(col));
            }
        }
    }
    std::vector<CycleClass> out;
    for (auto& [creator, chain] : cycles)
        if (!paired[creator])
            out.push_back(make_cycle(complex, points, dim, std::move(chain)));
    return out;
}

Filling filling(const CycleClass& cycle, const ChainComplex& complex, const PointSet& points)
{
    Filling out;
    if (cycle.chain.empty())
        return out;
    std::vector<int> support;
    for (std::size_t s : cycle.chain) {
        Simplex sx = complex.simplex(cycle.dim, s);
        support.insert(support.end(), sx.begin(), sx.end());
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    const std::size_t n = complex.size(0);
    std::vector<double> dist(n, kInfinity);
    for (std::size_t v = 0; v < n; ++v)
        for (int s : support)
            dist[v] = std::min(dist[v], (points[v] - points[s]).norm());

    const int fd = cycle.dim + 1;
    const std::size_t cols = complex.size(fd);
    std::vector<double> reach(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        const Simplex s = complex.simplex(fd, j);
        for (int v : s)
            reach[j] = std::max(reach[j], dist[v]);
    }
    std::vector<double> radii = reach;
    radii.push_back(0.0);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    auto attempt = [&](double r) {
        std::vector<char> admissible(cols);
        for (std::size_t j = 0; j < cols; ++j)
            admissible[j] = reach[j] <= r ? 1 : 0;
        return solve_boundary(complex, cycle.dim, cycle.chain, &admissible);
    };

    auto whole = attempt(radii.back());
    if (!whole)
        throw NeverFills("cycle is not a boundary in the complex");
    std::size_t lo = 0, hi = radii.size() - 1;
    Column best = *whole;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (auto x = attempt(radii[mid])) {
            hi = mid;
            best = std::move(*x);
        } else {
            lo = mid + 1;
        }
    }
    if (lo == radii.size() - 1)
        best = *whole;
    out.radius = radii[lo];
    out.chain = std::move(best);
    out.diameter = support_diameter(complex, points, fd, out.chain);
    return out;
}

double filling_diameter(const CycleClass& cycle, const ChainComplex& complex,
                        const PointSet& points)
{
    return filling(cycle, complex, points).radius;
}

ChainComplex clique_complex(std::size_t num_vertices, const std::vector<std::pair<int, int>>& edges,
                            int max_dim, std::size_t cap)
{
    std::vector<std::vector<int>> upper(num_vertices);
    for (auto [a, b] : edges) {
        if (a == b)
            continue;
        upper[std::min(a, b)].push_back(std::max(a, b));
    }
    for (auto& list : upper) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    std::vector<std::vector<Simplex>> higher(std::max(0, max_dim));
    std::size_t total = num_vertices;
    Simplex current;

    auto expand = [&](auto&& self, const std::vector<int>& candidates) -> void {
        const int d = static_cast<int>(current.size()) - 1;
        if (d >= 1) {
            higher[d - 1].push_back(current);
            if (++total > cap)
                throw SizeBudgetExceeded("clique complex exceeds " + std::to_string(cap) +
                                         " simplices");
        }
        if (d >= max_dim)
            return;
        std::vector<int> next;
        for (int c : candidates) {
            next.clear();
            std::set_intersection(candidates.begin(), candidates.end(), upper[c].begin(),
                                  upper[c].end(), std::back_inserter(next));
            current.push_back(c);
            self(self, next);
            current.pop_back();
        }
    };
    for (std::size_t v = 0; v < num_vertices; ++v) {
        current.assign(1, static_cast<int>(v));
        expand(expand, upper[v]);
    }
    for (auto& list : higher)
        std::sort(list.begin(), list.end());
    return ChainComplex(num_vertices, std::move(higher));
}

RipsComplex flag_complex(const PointSet& points, const std::vector<std::pair<int, int>>& edges,
                         int max_dim, std::size_t cap)
{
    RipsComplex out;
    out.chain = clique_complex(points.size(), edges, std::max(max_dim, 1), cap);
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 0; i < out.chain.size(1); ++i) {
        Simplex s = out.chain.simplex(1, i);
        e.push_back({s[0], s[1]});
    }
    std::vector<Triangle> tris;
    for (std::size_t i = 0; i < out.chain.size(2); ++i) {
        Simplex s = out.chain.simplex(2, i);
        tris.push_back({s[0], s[1], s[2]});
    }
    out.complex = EmbeddedComplex(points, e, std::move(tris));
    if (max_dim < 1)
        out.chain = clique_complex(points.size(), edges, max_dim, cap);
    return out;
}

RipsComplex rips_complex(const PointSet& points, double radius, int max_dim, std::size_t cap)
{
    if (!(radius > 0.0))
        throw InvalidArgument("Rips radius must be positive");
    std::vector<std::pair<int, int>> edges;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if ((points[i] - points[j]).squaredNorm() <= r2)
                edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    return flag_complex(points, edges, max_dim, cap);
}

H1Annotation::H1Annotation(const EmbeddedComplex& complex)
{
    const std::size_t n = complex.num_vertices();
    const auto& edges = complex.edges();
    std::vector<int> coord(edges.size(), -1);
    std::vector<char> seen(n, 0);
    std::vector<char> tree(edges.size(), 0);
    std::vector<int> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        seen[s] = 1;
        queue.assign(1, static_cast<int>(s));
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (const auto& inc : complex.incident(queue[h]))
                if (!seen[inc.neighbor]) {
                    seen[inc.neighbor] = 1;
                    tree[inc.edge] = 1;
                    queue.push_back(inc.neighbor);
                }
    }
    std::size_t m = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (!tree[e])
            coord[e] = static_cast<int>(m++);

    std::vector<long long> pivot_of_row(m, -1);
    std::vector<Column> reduced;
    Column scratch;
    for (const Triangle& t : complex.triangles()) {
        Column col;
        for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[0], t[2]}}) {
            const int c = coord[*complex.find_edge(a, b)];
            if (c >= 0)
                col.push_back(static_cast<std::size_t>(c));
        }
        std::sort(col.begin(), col.end());
        while (!col.empty() && pivot_of_row[col.back()] >= 0)
            add_column(col, reduced[pivot_of_row[col.back()]], scratch);
        if (!col.empty()) {
            pivot_of_row[col.back()] = static_cast<long long>(reduced.size());
            reduced.push_back(std::move(col));
        }
    }
    rank_ = static_cast<int>(m - reduced.size());
    words_ = (static_cast<std::size_t>(rank_) + 63) / 64;

    // A pivot coordinate equals the sum of the lower coordinates in its column.
    std::vector<Class> ann(m, Class(words_, 0));
    int free_index = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (pivot_of_row[i] < 0) {
            ann[i][free_index / 64] |= std::uint64_t{1} << (free_index % 64);
            ++free_index;
        } else {
            for (std::size_t j : reduced[pivot_of_row[i]])
                if (j != i)
                    add(ann[i], ann[j]);
        }
    }
    edge_.assign(edges.size(), Class(words_, 0));
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (coord[e] >= 0)
            edge_[e] = ann[coord[e]];
}

void H1Annotation::add(Class& into, const Class& other)
{
    for (std::size_t w = 0; w < into.size(); ++w)
        into[w] ^= other[w];
}

bool H1Annotation::is_zero(const Class& c)
{
    return std::all_of(c.begin(), c.end(), [](std::uint64_t w) { return w == 0; });
}

H1Annotation::Class H1Annotation::of_edges(const std::vector<int>& edges) const
{
    Class c = zero();
    for (int e : edges)
        add(c, edge_[e]);
    return c;
}

H1Annotation::Class H1Annotation::of_loop(const EmbeddedComplex& complex,
                                          const LoopPath& loop) const
{
    return of_edges(loop_edges(complex, loop));
}

IntegerH1::IntegerH1(const EmbeddedComplex& complex, std::size_t max_entries)
{
    const std::size_t n = complex.num_vertices();
    const auto& edges = complex.edges();
    coordinate_.assign(edges.size(), -1);
    std::vector<char> seen(n, 0);
    std::vector<char> tree(edges.size(), 0);
    std::vector<int> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        seen[s] = 1;
        queue.assign(1, static_cast<int>(s));
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (const auto& inc : complex.incident(queue[h]))
                if (!seen[inc.neighbor]) {
                    seen[inc.neighbor] = 1;
                    tree[inc.edge] = 1;
                    queue.push_back(inc.neighbor);
                }
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (!tree[e]) {
            coordinate_[e] = static_cast<int>(nontree_.size());
            nontree_.push_back(static_cast<int>(e));
        }
    const std::size_t m = nontree_.size();
    if (complex.triangles().size() * m > max_entries)
        throw SizeBudgetExceeded("integer H1 relation matrix too large");

    std::vector<std::vector<long long>> rows;
    for (const Triangle& t : complex.triangles()) {
        std::vector<long long> row(m, 0);
        bool any = false;
        // boundary [a,b,c] = [b,c] - [a,c] + [a,b]
        const std::pair<std::pair<int, int>, int> terms[3] = {
            {{t[1], t[2]}, 1}, {{t[0], t[2]}, -1}, {{t[0], t[1]}, 1}};
        for (const auto& [ab, sign] : terms) {
            const int c = coordinate_[*complex.find_edge(ab.first, ab.second)];
            if (c >= 0) {
                row[c] += sign;
                any = true;
            }
        }
        if (any)
            rows.push_back(std::move(row));
    }

    // Hermite normal form by row operations.
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 &&
                    (best == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[best][c])))
                    best = i;
            if (best == rows.size())
                break;
            std::swap(rows[r], rows[best]);
            bool clean = true;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0)
                    continue;
                const long long q = rows[i][c] / rows[r][c];
                for (std::size_t j = c; j < m; ++j)
                    if (rows[r][j] != 0)
                        rows[i][j] = checked_sub(rows[i][j], checked_mul(q, rows[r][j]));
                if (rows[i][c] != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (r >= rows.size() || rows[r][c] == 0)
            continue;
        if (rows[r][c] < 0)
            for (long long& x : rows[r])
                x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            const long long q = floor_div(rows[i][c], rows[r][c]);
            if (q != 0)
                for (std::size_t j = c; j < m; ++j)
                    rows[i][j] = checked_sub(rows[i][j], checked_mul(q, rows[r][j]));
        }
        pivot_col_.push_back(static_cast<int>(c));
        ++r;
    }
    rows.resize(r);
    hnf_ = std::move(rows);
}

IntegerH1::Class IntegerH1::reduce(Class v) const
{
    for (std::size_t k = 0; k < hnf_.size(); ++k) {
        const int p = pivot_col_[k];
        const long long q = floor_div(v[p], hnf_[k][p]);
        if (q != 0)
            for (std::size_t j = p; j < v.size(); ++j)
                v[j] = checked_sub(v[j], checked_mul(q, hnf_[k][j]));
    }
    return v;
}

IntegerH1::Class IntegerH1::of_loop(const EmbeddedComplex& complex, const LoopPath& loop) const
{
    Class v(nontree_.size(), 0);
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
        const int a = loop.vertices[i];
        const int b = loop.vertices[i + 1];
        const int e = *complex.find_edge(a, b);
        if (coordinate_[e] >= 0)
            v[coordinate_[e]] += a < b ? 1 : -1;
    }
    return reduce(std::move(v));
}

IntegerH1::Class IntegerH1::add(const Class& a, const Class& b) const
{
    Class v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = a[i] + b[i];
    return reduce(std::move(v));
}

bool IntegerH1::is_zero(const Class& c) const
{
    return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
}

}   // namespace lipsing
