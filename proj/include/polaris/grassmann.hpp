#pragma once

#include "polaris/parallel.hpp"
#include "polaris/polar_space.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace polaris {

// The Grassmann graph Gamma_k: vertices are the k-dimensional (projective)
// totally singular subspaces; for k <= n-2 two are adjacent when they meet
// in dimension k-1 and span a singular subspace, for k = n-1 when they meet
// in dimension n-2.

inline bool adjacent(const PolarSpace& s, const RowSpace& a, const RowSpace& b) {
    if (a.rank() != b.rank())
        throw std::invalid_argument("adjacent: projective dimensions differ");
    if (a == b)
        throw std::invalid_argument("adjacent: vertices must be distinct");
    const int k = a.proj_dim();
    RowSpace m = meet(a, b);
    if (m.rank() != a.rank() - 1) return false;
    if (k == s.rank - 1) return true;
    return is_singular_subspace(s, join(a, b));
}

/// All subspaces X with bottom <= X <= top and rank(X) == target_rank.
/// Pure span enumeration: `top` is expected to be totally singular, so no
/// form conditions are involved.
inline std::vector<RowSpace> subspaces_between(const RowSpace& bottom, const RowSpace& top,
                                               int target_rank) {
    if (!contains(top, bottom))
        throw std::invalid_argument("subspaces_between: bottom is not inside top");
    if (target_rank < bottom.rank() || target_rank > top.rank())
        throw std::invalid_argument("subspaces_between: rank out of range");
    std::set<RowSpace> level{bottom};
    auto pts = projective_points(top);
    for (int r = bottom.rank(); r < target_rank; ++r) {
        std::set<RowSpace> next;
        for (const auto& sp : level)
            for (const auto& v : pts) {
                if (member(sp, v)) continue;
                Matrix m = sp.rows;
                m.push_back(v);
                next.insert(rref_canonical(std::move(m), sp.p, sp.ambient));
            }
        level = std::move(next);
    }
    return {level.begin(), level.end()};
}

/// A line of the Grassmann space: the pencil [S,U]_k of all k-subspaces
/// between S = a meet b and U = <a,b>. Carries its full member list
/// (exactly p+1 elements).
struct PencilLine {
    RowSpace bottom; // dim k-1
    RowSpace top;    // dim k+1
    std::vector<RowSpace> members;
};

inline std::optional<PencilLine> line_through(const PolarSpace& s, const RowSpace& a,
                                              const RowSpace& b) {
    if (a == b || a.rank() != b.rank()) return std::nullopt;
    if (!adjacent(s, a, b)) return std::nullopt;
    PencilLine line;
    line.bottom = meet(a, b);
    line.top = join(a, b);
    line.members = subspaces_between(line.bottom, line.top, a.rank());
    return line;
}

// ---------------------------------------------------------------------------
// Maximal cliques of Gamma_k

/// One maximal clique of the Grassmann graph: a top <U]_k, a star [S,M]_k
/// (k <= n-3) or, at the dual level k = n-1, the line [S>_{n-1}.
struct MaxClique {
    enum class Tag { Top, Star, DualLine };
    Tag tag = Tag::Top;
    RowSpace u;                   // Top: U of dim k+1
    RowSpace s;                   // Star/DualLine: S
    RowSpace m;                   // Star: the chosen maximal M through the join
    std::vector<RowSpace> members;
};

struct CliqueClassification {
    std::vector<MaxClique> candidates; // preferred classification first
    bool maximal = false;              // input equals the preferred member set
};

namespace detail {

inline void require_clique(const PolarSpace& s, const std::vector<RowSpace>& c) {
    if (c.size() < 2) throw std::invalid_argument("clique must have at least 2 elements");
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j)
            if (!adjacent(s, c[i], c[j]))
                throw std::invalid_argument("input set is not a clique");
}

} // namespace detail

inline std::vector<RowSpace> collect_big_star(const PolarSpace& s, const RowSpace& S, int k);

inline CliqueClassification classify_clique(const PolarSpace& s, const std::vector<RowSpace>& c) {
    detail::require_clique(s, c);
    const int k = c.front().proj_dim();
    CliqueClassification out;

    RowSpace common = c.front();
    RowSpace span = c.front();
    for (size_t i = 1; i < c.size(); ++i) {
        common = meet(common, c[i]);
        span = join(span, c[i]);
    }

    if (k == s.rank - 1) {
        if (common.rank() != k)
            throw std::invalid_argument("dual-level clique has no common (n-2)-subspace");
        MaxClique line;
        line.tag = MaxClique::Tag::DualLine;
        line.s = common;
        line.members = collect_big_star(s, common, k);
        out.maximal = (line.members.size() == c.size());
        out.candidates.push_back(std::move(line));
        return out;
    }

    // Note: the star [S,M]_k is a meaningful member set for every k <= n-2,
    // though it is a maximal clique of the graph only for k <= n-3 (at
    // k = n-2 it is a pencil line inside the top of M).
    const bool top_fits = span.rank() == k + 2 && is_singular_subspace(s, span);
    const bool star_fits = common.rank() == k && is_singular_subspace(s, span);
    std::optional<MaxClique> top_cand, star_cand;
    if (top_fits) {
        MaxClique top;
        top.tag = MaxClique::Tag::Top;
        top.u = span;
        top.members = subspaces_between(zero_space(s.p, s.ambient), span, k + 1);
        top_cand = std::move(top);
    }
    if (star_fits) {
        MaxClique star;
        star.tag = MaxClique::Tag::Star;
        star.s = common;
        star.m = detail::greedy_max_singular(s, span);
        star.members = subspaces_between(star.s, star.m, k + 1);
        star_cand = std::move(star);
    }
    if (!top_cand && !star_cand)
        throw std::invalid_argument("clique fits neither a top nor a star");
    std::set<RowSpace> input(c.begin(), c.end());
    auto equals_input = [&](const MaxClique& cand) {
        return std::set<RowSpace>(cand.members.begin(), cand.members.end()) == input;
    };
    // preference: the candidate whose member set the clique fills exactly;
    // ties and partial cliques go to the classification matching the join
    // dimension (a top when the join is (k+1)-dimensional)
    if (top_cand && star_cand) {
        if (equals_input(*star_cand) && !equals_input(*top_cand)) {
            out.candidates.push_back(std::move(*star_cand));
            out.candidates.push_back(std::move(*top_cand));
        } else {
            out.candidates.push_back(std::move(*top_cand));
            out.candidates.push_back(std::move(*star_cand));
        }
    } else if (top_cand) {
        out.candidates.push_back(std::move(*top_cand));
    } else {
        out.candidates.push_back(std::move(*star_cand));
    }
    out.maximal = equals_input(out.candidates.front());
    return out;
}

// ---------------------------------------------------------------------------
// Regions: big stars [S>_k, parabolic subspaces [N>_k, intervals [S,U]_k

struct Region {
    enum class Tag { BigStar, Parabolic, Interval };
    Tag tag = Tag::BigStar;
    RowSpace s; // BigStar: S (dim k-1); Parabolic: N; Interval: lower bound
    RowSpace u; // Interval: upper bound
};

inline std::vector<RowSpace> collect_big_star(const PolarSpace& s, const RowSpace& S, int k) {
    if (S.rank() != k)
        throw std::invalid_argument("big star needs S of projective dimension k-1");
    QuotientSpace q = quotient_space(s, S);
    std::vector<RowSpace> out;
    out.reserve(q.space.point_count());
    for (const auto& pt : q.space.points)
        out.push_back(q.lift(rref_canonical({pt}, q.space.p, q.space.ambient)));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<RowSpace> collect_region(const PolarSpace& s, const Region& r, int k) {
    switch (r.tag) {
        case Region::Tag::BigStar:
            return collect_big_star(s, r.s, k);
        case Region::Tag::Parabolic: {
            if (r.s.rank() > k)
                throw std::invalid_argument("parabolic region needs dim N <= k-1");
            if (r.s.empty()) return enumerate_singular(s, k);
            QuotientSpace q = quotient_space(s, r.s);
            int m = k - r.s.rank(); // index of the quotient Grassmannian
            std::vector<RowSpace> out;
            for (const auto& z : enumerate_singular(q.space, m))
                out.push_back(q.lift(z));
            std::sort(out.begin(), out.end());
            return out;
        }
        case Region::Tag::Interval: {
            if (!is_singular_subspace(s, r.u))
                throw std::invalid_argument("interval top must be singular");
            return subspaces_between(r.s, r.u, k + 1);
        }
    }
    throw std::logic_error("unreachable region tag");
}

/// The collineation between the parabolic subspace [N>_k and the index-m
/// Grassmann space of the quotient polar space, m = k - dim(N) - 1.
struct ParabolicCollineation {
    QuotientSpace q;
    int k = 0;
    int m = 0;

    RowSpace to_quotient(const RowSpace& x) const {
        if (x.rank() != k + 1)
            throw std::invalid_argument("parabolic collineation: wrong source dimension");
        RowSpace z = q.project(x);
        if (z.rank() != m + 1)
            throw std::invalid_argument("parabolic collineation: projection has wrong rank");
        return z;
    }
    RowSpace from_quotient(const RowSpace& z) const {
        if (z.rank() != m + 1)
            throw std::invalid_argument("parabolic collineation: wrong quotient dimension");
        return q.lift(z);
    }
};

inline ParabolicCollineation parabolic_collineation(const PolarSpace& s, const RowSpace& N, int k) {
    if (N.rank() > k)
        throw std::invalid_argument("parabolic collineation needs dim N <= k-1");
    ParabolicCollineation pc{quotient_space(s, N), k, k - N.rank()};
    return pc;
}

// ---------------------------------------------------------------------------
// Span closure and independence in the Grassmann space

/// Least subspace of the partial linear space containing xs: saturate with
/// full pencil lines through collinear pairs until stable.
inline std::set<RowSpace> span_closure(const PolarSpace& s, const std::set<RowSpace>& xs) {
    std::set<RowSpace> closure = xs;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<RowSpace> cur(closure.begin(), closure.end());
        for (size_t i = 0; i < cur.size() && !grew; ++i)
            for (size_t j = i + 1; j < cur.size() && !grew; ++j) {
                auto line = line_through(s, cur[i], cur[j]);
                if (!line) continue;
                for (const auto& x : line->members)
                    if (closure.insert(x).second) grew = true;
            }
    }
    return closure;
}

/// Independence per the partial-linear-space definition: no proper subset
/// spans the same closure, equivalently no element lies in the closure of
/// the others.
inline bool independent(const PolarSpace& s, const std::vector<RowSpace>& xs) {
    for (size_t i = 0; i < xs.size(); ++i) {
        std::set<RowSpace> rest(xs.begin(), xs.end());
        rest.erase(xs[i]);
        if (rest.size() != xs.size() - 1) return false; // duplicate input
        if (span_closure(s, rest).count(xs[i])) return false;
    }
    return true;
}

/// The dual vector of a hyperplane H inside the space spanned by `basis`:
/// the (unique up to scale) functional on the coordinates that annihilates
/// H. Returned normalized.
inline Vec hyperplane_dual(const Matrix& basis, const RowSpace& h, uint32_t p, int ambient) {
    Matrix coords;
    for (const auto& row : h.rows) {
        auto c = express_in_basis(basis, row, p, ambient);
        if (!c) throw std::invalid_argument("hyperplane is not inside the space");
        coords.push_back(*c);
    }
    RowSpace ker = kernel(coords, p, static_cast<int>(basis.size()));
    if (ker.rank() != 1)
        throw std::invalid_argument("subspace is not a hyperplane of the given space");
    return ker.rows[0];
}

/// Fast projective-independence path: defined when xs lies in one top
/// (join of dimension k+1) or one star (meet of dimension k-1 and singular
/// join). Returns nullopt when neither applies; by the agreement property
/// it must match `independent` whenever it is defined.
inline std::optional<bool> independent_projective(const PolarSpace& s,
                                                  const std::vector<RowSpace>& xs) {
    if (xs.size() < 2) return true;
    const int k = xs.front().proj_dim();
    RowSpace common = xs.front(), span = xs.front();
    for (size_t i = 1; i < xs.size(); ++i) {
        if (xs[i].proj_dim() != k) return std::nullopt;
        common = meet(common, xs[i]);
        span = join(span, xs[i]);
        for (size_t j = 0; j < i; ++j)
            if (xs[i] == xs[j]) return false;
    }
    if (!is_singular_subspace(s, span)) return std::nullopt;
    if (span.rank() == k + 2) {
        // inside the top <span]: members are hyperplanes, test dual vectors
        Matrix duals;
        for (const auto& x : xs)
            duals.push_back(hyperplane_dual(span.rows, x, s.p, s.ambient));
        return rref_canonical(std::move(duals), s.p, span.rank()).rank() ==
               static_cast<int>(xs.size());
    }
    if (common.rank() == k) {
        // inside a star [common, M]: members are points of the quotient
        QuotientSpace q = quotient_space(s, common);
        Matrix vecs;
        for (const auto& x : xs) {
            RowSpace z = q.project(x);
            if (z.rank() != 1) return std::nullopt;
            vecs.push_back(z.rows[0]);
        }
        return rref_canonical(std::move(vecs), s.p, q.space.ambient).rank() ==
               static_cast<int>(xs.size());
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Graph utilities on explicit vertex sets

inline std::vector<std::vector<uint8_t>> grassmann_adjacency(const PolarSpace& s,
                                                             const std::vector<RowSpace>& verts) {
    const int m = static_cast<int>(verts.size());
    std::vector<std::vector<uint8_t>> adj(m, std::vector<uint8_t>(m, 0));
    parallel_for(0, m, [&](int a) {
        for (int b = a + 1; b < m; ++b)
            if (verts[a] != verts[b] && adjacent(s, verts[a], verts[b]))
                adj[a][b] = 1;
    });
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            adj[b][a] = adj[a][b];
    return adj;
}

constexpr int kUnreachable = -1;

inline std::vector<int> bfs_distances(const std::vector<std::vector<uint8_t>>& adj, int src) {
    const int m = static_cast<int>(adj.size());
    std::vector<int> dist(m, kUnreachable);
    std::vector<int> queue{src};
    dist[src] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int u = 0; u < m; ++u)
            if (adj[v][u] && dist[u] == kUnreachable) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
    }
    return dist;
}

/// I(a,b): vertices on some geodesic between a and b.
inline std::vector<int> interval(const std::vector<std::vector<uint8_t>>& adj, int a, int b) {
    auto da = bfs_distances(adj, a);
    auto db = bfs_distances(adj, b);
    std::vector<int> out;
    if (da[b] == kUnreachable) return out;
    for (size_t v = 0; v < adj.size(); ++v)
        if (da[v] != kUnreachable && db[v] != kUnreachable && da[v] + db[v] == da[b])
            out.push_back(static_cast<int>(v));
    return out;
}

/// Convexity of `subset` inside the graph on `adj`: every geodesic between
/// members stays inside the subset.
inline bool is_convex_subset(const std::vector<std::vector<uint8_t>>& adj,
                             const std::vector<int>& subset) {
    std::vector<uint8_t> in(adj.size(), 0);
    for (int v : subset) in[v] = 1;
    for (size_t i = 0; i < subset.size(); ++i)
        for (size_t j = i + 1; j < subset.size(); ++j)
            for (int v : interval(adj, subset[i], subset[j]))
                if (!in[v]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Local independence (dual level)

/// xs in G_{n-1} is locally independent when, for every member S, the
/// hyperplanes cut by its neighbors form an independent subset of the
/// projective space of hyperplanes of S.
inline bool locally_independent(const PolarSpace& s, const std::vector<RowSpace>& xs) {
    for (const auto& x : xs)
        if (x.rank() != s.rank)
            throw std::invalid_argument("locally_independent needs maximal singular subspaces");
    for (size_t i = 0; i < xs.size(); ++i) {
        std::set<RowSpace> hyperplanes;
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i == j || xs[i] == xs[j]) continue;
            if (adjacent(s, xs[i], xs[j]))
                hyperplanes.insert(meet(xs[i], xs[j]));
        }
        Matrix duals;
        for (const auto& h : hyperplanes)
            duals.push_back(hyperplane_dual(xs[i].rows, h, s.p, s.ambient));
        if (rref_canonical(duals, s.p, s.rank).rank() != static_cast<int>(duals.size()))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parabolic recognition

/// If xs is exactly the parabolic subspace [N>_k for N = meet of all
/// members, return N; none otherwise.
inline std::optional<RowSpace> recognize_parabolic(const PolarSpace& s,
                                                   const std::vector<RowSpace>& xs, int k) {
    if (xs.empty()) return std::nullopt;
    RowSpace N = xs.front();
    for (const auto& x : xs) {
        if (x.rank() != k + 1) return std::nullopt;
        N = meet(N, x);
    }
    if (N.rank() > k) return std::nullopt; // degenerate (single member)
    Region r{Region::Tag::Parabolic, N, {}};
    std::vector<RowSpace> region = collect_region(s, r, k);
    std::set<RowSpace> a(xs.begin(), xs.end()), b(region.begin(), region.end());
    if (a == b) return N;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Neighbor generation

/// All Gamma_k-neighbors of x, generated hyperplane-by-hyperplane.
inline std::vector<RowSpace> neighbors_of(const PolarSpace& s, const RowSpace& x) {
    const int k = x.proj_dim();
    std::set<RowSpace> out;
    auto hyperplanes = subspaces_between(zero_space(s.p, s.ambient), x, x.rank() - 1);
    for (const auto& h : hyperplanes) {
        for (const auto& qv : s.points) {
            if (member(x, qv)) continue;
            bool perp_h = true;
            for (const auto& row : h.rows)
                if (s.bilinear(row, qv) != 0) { perp_h = false; break; }
            if (!perp_h) continue;
            if (k <= s.rank - 2) {
                // need q perp to the whole of x so that <x, Y> is singular
                bool perp_x = true;
                for (const auto& row : x.rows)
                    if (s.bilinear(row, qv) != 0) { perp_x = false; break; }
                if (!perp_x) continue;
            }
            Matrix m = h.rows;
            m.push_back(qv);
            RowSpace y = rref_canonical(std::move(m), s.p, s.ambient);
            if (y.rank() == x.rank() && is_singular_subspace(s, y) && !(y == x))
                out.insert(std::move(y));
        }
    }
    return {out.begin(), out.end()};
}

} // namespace polaris
