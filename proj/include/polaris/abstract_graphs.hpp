#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polaris {

/// A singular subset of J = {1..n, -1..-n}: never contains both j and -j.
/// Elements are kept sorted with |a| ascending and +a before -a, which fixes
/// the canonical vertex order of every abstract graph built here.
struct SignedSet {
    std::vector<int> elems;

    static bool elem_less(int a, int b) {
        int aa = a < 0 ? -a : a, ab = b < 0 ? -b : b;
        if (aa != ab) return aa < ab;
        return a > b; // positive first
    }

    static SignedSet of(std::vector<int> xs) {
        std::sort(xs.begin(), xs.end(), elem_less);
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            if (xs[i] == xs[i + 1]) throw std::invalid_argument("signed set has a repeated element");
            if (xs[i] == -xs[i + 1]) throw std::invalid_argument("signed set contains j and -j");
        }
        for (int x : xs)
            if (x == 0) throw std::invalid_argument("signed set elements are nonzero");
        return SignedSet{std::move(xs)};
    }

    int size() const { return static_cast<int>(elems.size()); }
    bool contains(int x) const {
        return std::find(elems.begin(), elems.end(), x) != elems.end();
    }

    friend bool operator==(const SignedSet& a, const SignedSet& b) = default;
    friend bool operator<(const SignedSet& a, const SignedSet& b) {
        return std::lexicographical_compare(a.elems.begin(), a.elems.end(),
                                            b.elems.begin(), b.elems.end(), elem_less);
    }
};

inline int ss_inter_size(const SignedSet& a, const SignedSet& b) {
    int c = 0;
    for (int x : a.elems)
        if (b.contains(x)) ++c;
    return c;
}

inline bool ss_subset(const SignedSet& a, const SignedSet& b) {
    for (int x : a.elems)
        if (!b.contains(x)) return false;
    return true;
}

/// Union of two signed sets; nullopt when the union is not singular.
inline std::optional<SignedSet> ss_union_singular(const SignedSet& a, const SignedSet& b) {
    std::vector<int> u = a.elems;
    for (int x : b.elems)
        if (!a.contains(x)) {
            if (a.contains(-x)) return std::nullopt;
            u.push_back(x);
        }
    return SignedSet::of(std::move(u));
}

/// A finite simple graph with canonical vertex labels.
struct AbstractGraph {
    std::string name;
    int n = 0;
    int k = -1; // PJ level when applicable
    std::vector<SignedSet> labels;
    std::vector<std::vector<uint8_t>> adj;

    int size() const { return static_cast<int>(labels.size()); }
    bool adjacent(int a, int b) const { return adj[a][b] != 0; }
    int vertex_id(const SignedSet& s) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), s);
        if (it == labels.end() || !(*it == s)) return -1;
        return static_cast<int>(it - labels.begin());
    }
    int degree(int v) const {
        return std::accumulate(adj[v].begin(), adj[v].end(), 0);
    }
    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (int u = 0; u < size(); ++u)
            if (adj[v][u]) out.push_back(u);
        return out;
    }
};

namespace detail {

inline void fill_edges(AbstractGraph& g, bool (*pred)(const SignedSet&, const SignedSet&, int, bool),
                       int k, bool sum_clause) {
    const int m = g.size();
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (pred(g.labels[a], g.labels[b], k, sum_clause))
                g.adj[a][b] = g.adj[b][a] = 1;
}

inline void gen_signed_subsets(int n, int size, std::vector<SignedSet>& out) {
    std::vector<int> abs_pick;
    std::vector<int> cur;
    auto rec_signs = [&](auto&& self, size_t i) -> void {
        if (i == abs_pick.size()) {
            out.push_back(SignedSet::of(cur));
            return;
        }
        cur.push_back(abs_pick[i]);
        self(self, i + 1);
        cur.back() = -abs_pick[i];
        self(self, i + 1);
        cur.pop_back();
    };
    auto rec_abs = [&](auto&& self, int from) -> void {
        if (static_cast<int>(abs_pick.size()) == size) {
            rec_signs(rec_signs, 0);
            return;
        }
        for (int a = from; a <= n; ++a) {
            abs_pick.push_back(a);
            self(self, a + 1);
            abs_pick.pop_back();
        }
    };
    rec_abs(rec_abs, 1);
    std::sort(out.begin(), out.end());
}

} // namespace detail

/// Polar Johnson graph PJ(n,k): vertices are the singular (k+1)-subsets of
/// {±1..±n}; two are adjacent when they share k elements and (for
/// k <= n-2) their union is singular. `sum_clause` overrides the default
/// rule so the graph can be matched against Grassmann levels of a larger
/// ambient space, where the singular-union requirement persists up to the
/// ambient rank.
inline AbstractGraph build_pj(int n, int k, std::optional<bool> sum_clause = std::nullopt) {
    if (n < 1 || k < 0 || k > n - 1)
        throw std::invalid_argument("PJ(n,k) needs 0 <= k <= n-1");
    AbstractGraph g;
    g.name = "PJ(" + std::to_string(n) + "," + std::to_string(k) + ")";
    g.n = n;
    g.k = k;
    detail::gen_signed_subsets(n, k + 1, g.labels);
    const bool clause = sum_clause.value_or(k <= n - 2);
    const int m = g.size();
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            if (ss_inter_size(g.labels[a], g.labels[b]) != k) continue;
            if (clause && !ss_union_singular(g.labels[a], g.labels[b])) continue;
            g.adj[a][b] = g.adj[b][a] = 1;
        }
    return g;
}

/// Hypercube H_n on subsets of {1..n} (adjacent: symmetric difference 1).
inline AbstractGraph build_hypercube(int n) {
    if (n < 1) throw std::invalid_argument("hypercube needs n >= 1");
    AbstractGraph g;
    g.name = "H_" + std::to_string(n);
    g.n = n;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> e;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) e.push_back(i + 1);
        g.labels.push_back(SignedSet::of(std::move(e)));
    }
    std::sort(g.labels.begin(), g.labels.end());
    const int m = g.size();
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    auto symdiff = [](const SignedSet& a, const SignedSet& b) {
        int inter = ss_inter_size(a, b);
        return a.size() + b.size() - 2 * inter;
    };
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (symdiff(g.labels[a], g.labels[b]) == 1)
                g.adj[a][b] = g.adj[b][a] = 1;
    return g;
}

/// Half-cube 1/2 H_n on even-size subsets of {1..n} (adjacent: symmetric
/// difference 2).
inline AbstractGraph build_halfcube(int n) {
    if (n < 2) throw std::invalid_argument("halfcube needs n >= 2");
    AbstractGraph g;
    g.name = "1/2H_" + std::to_string(n);
    g.n = n;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) % 2) continue;
        std::vector<int> e;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) e.push_back(i + 1);
        g.labels.push_back(SignedSet::of(std::move(e)));
    }
    std::sort(g.labels.begin(), g.labels.end());
    const int m = g.size();
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    auto symdiff = [](const SignedSet& a, const SignedSet& b) {
        int inter = ss_inter_size(a, b);
        return a.size() + b.size() - 2 * inter;
    };
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (symdiff(g.labels[a], g.labels[b]) == 2)
                g.adj[a][b] = g.adj[b][a] = 1;
    return g;
}

// ---------------------------------------------------------------------------
// PJ clique structure

struct PJCliques {
    // tops: one per PJ(n,k+1) vertex W; members = (k+1)-subsets of W
    std::vector<SignedSet> top_index;
    std::vector<std::vector<int>> top_members;
    // stars: (S in PJ(n,k-1), M in PJ(n,n-1)) with S subset of M
    std::vector<std::pair<SignedSet, SignedSet>> star_index;
    std::vector<std::vector<int>> star_members;
    // big stars: one per PJ(n,k-1) vertex S; members = vertices containing S
    std::vector<SignedSet> big_star_index;
    std::vector<std::vector<int>> big_star_members;
};

inline PJCliques pj_cliques(const AbstractGraph& pj) {
    const int n = pj.n, k = pj.k;
    if (k < 1 || k > n - 2)
        throw std::invalid_argument("pj_cliques needs 1 <= k <= n-2");
    PJCliques out;
    std::vector<SignedSet> upper;
    detail::gen_signed_subsets(n, k + 2, upper);
    for (const auto& w : upper) {
        std::vector<int> members;
        for (size_t i = 0; i < w.elems.size(); ++i) {
            std::vector<int> sub;
            for (size_t j = 0; j < w.elems.size(); ++j)
                if (j != i) sub.push_back(w.elems[j]);
            members.push_back(pj.vertex_id(SignedSet::of(std::move(sub))));
        }
        std::sort(members.begin(), members.end());
        out.top_index.push_back(w);
        out.top_members.push_back(std::move(members));
    }
    if (k <= n - 3) {
        std::vector<SignedSet> lower, maximal;
        detail::gen_signed_subsets(n, k, lower);
        detail::gen_signed_subsets(n, n, maximal);
        for (const auto& s : lower) {
            // big star
            std::vector<int> bs;
            for (int v = 0; v < pj.size(); ++v)
                if (ss_subset(s, pj.labels[v])) bs.push_back(v);
            out.big_star_index.push_back(s);
            out.big_star_members.push_back(bs);
            // stars through s
            for (const auto& m : maximal) {
                if (!ss_subset(s, m)) continue;
                std::vector<int> members;
                for (int x : m.elems) {
                    if (s.contains(x)) continue;
                    std::vector<int> e = s.elems;
                    e.push_back(x);
                    members.push_back(pj.vertex_id(SignedSet::of(std::move(e))));
                }
                std::sort(members.begin(), members.end());
                out.star_index.emplace_back(s, m);
                out.star_members.push_back(std::move(members));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Isomorphism search

struct IsoOptions {
    uint64_t node_budget = 50'000'000;
};

enum class IsoStatus { Found, None, BudgetExceeded };

/// A verified vertex bijection preserving and reflecting adjacency, or the
/// explicit outcome when none exists / the search budget ran out. None is
/// produced only after exhausting the full search space.
struct IsoResult {
    IsoStatus status = IsoStatus::None;
    std::vector<int> mapping; // g-vertex -> h-vertex
    uint64_t nodes = 0;
};

inline bool check_isomorphism(const AbstractGraph& g, const AbstractGraph& h,
                              const std::vector<int>& map) {
    const int m = g.size();
    if (h.size() != m || static_cast<int>(map.size()) != m) return false;
    std::vector<uint8_t> seen(m, 0);
    for (int v : map) {
        if (v < 0 || v >= m || seen[v]) return false;
        seen[v] = 1;
    }
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (g.adj[a][b] != h.adj[map[a]][map[b]]) return false;
    return true;
}

namespace detail {

// One round of neighborhood color refinement; returns the stabilized colors.
inline std::vector<int> wl_colors(const AbstractGraph& g) {
    const int m = g.size();
    std::vector<int> col(m, 0);
    for (int v = 0; v < m; ++v) col[v] = g.degree(v);
    for (int round = 0; round < m; ++round) {
        std::vector<std::vector<int>> sig(m);
        for (int v = 0; v < m; ++v) {
            sig[v].push_back(col[v]);
            std::vector<int> nb;
            for (int u = 0; u < m; ++u)
                if (g.adj[v][u]) nb.push_back(col[u]);
            std::sort(nb.begin(), nb.end());
            sig[v].insert(sig[v].end(), nb.begin(), nb.end());
        }
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(m);
        for (int v = 0; v < m; ++v)
            next[v] = ids.emplace(sig[v], static_cast<int>(ids.size())).first->second;
        if (next == col) break;
        col = std::move(next);
    }
    return col;
}

} // namespace detail

/// Backtracking isomorphism search with color-refinement pruning. The
/// witness is re-verified edge-by-edge before it is returned; None means
/// the search space was exhausted, BudgetExceeded is a distinct outcome.
inline IsoResult find_isomorphism(const AbstractGraph& g, const AbstractGraph& h,
                                  IsoOptions opts = {}) {
    IsoResult res;
    const int m = g.size();
    if (h.size() != m) {
        res.status = IsoStatus::None;
        return res;
    }
    if (m == 0) {
        res.status = IsoStatus::Found;
        return res;
    }
    std::vector<int> gc = detail::wl_colors(g), hc = detail::wl_colors(h);
    {
        std::vector<int> a = gc, b = hc;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
            res.status = IsoStatus::None;
            return res;
        }
    }
    // process order: rarest color first, then most constrained by mapped
    // neighbors (recomputed greedily as the search deepens)
    std::vector<int> color_count(m + 1, 0);
    for (int c : gc) ++color_count[c];

    std::vector<int> map(m, -1), used(m, 0);
    std::vector<int> order;
    {
        std::vector<uint8_t> placed(m, 0);
        for (int step = 0; step < m; ++step) {
            int best = -1;
            long best_key = 0;
            for (int v = 0; v < m; ++v) {
                if (placed[v]) continue;
                long mapped_nbrs = 0;
                for (int u = 0; u < m; ++u)
                    if (g.adj[v][u] && placed[u]) ++mapped_nbrs;
                long key = mapped_nbrs * 10000 - color_count[gc[v]];
                if (best < 0 || key > best_key) {
                    best = v;
                    best_key = key;
                }
            }
            order.push_back(best);
            placed[best] = 1;
        }
    }

    uint64_t nodes = 0;
    bool exceeded = false;
    auto rec = [&](auto&& self, int depth) -> bool {
        if (depth == m) return true;
        if (++nodes > opts.node_budget) {
            exceeded = true;
            return false;
        }
        int v = order[depth];
        for (int w = 0; w < m; ++w) {
            if (used[w] || hc[w] != gc[v]) continue;
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d) {
                int u = order[d];
                if (g.adj[v][u] != h.adj[w][map[u]]) ok = false;
            }
            if (!ok) continue;
            map[v] = w;
            used[w] = 1;
            if (self(self, depth + 1)) return true;
            if (exceeded) return false;
            map[v] = -1;
            used[w] = 0;
        }
        return false;
    };
    bool found = rec(rec, 0);
    res.nodes = nodes;
    if (exceeded) {
        res.status = IsoStatus::BudgetExceeded;
        return res;
    }
    if (!found) {
        res.status = IsoStatus::None;
        return res;
    }
    if (!check_isomorphism(g, h, map))
        throw std::logic_error("isomorphism witness failed verification");
    res.status = IsoStatus::Found;
    res.mapping = std::move(map);
    return res;
}

// ---------------------------------------------------------------------------
// Maximal cliques (Bron-Kerbosch with pivoting), generic over an adjacency
// matrix. Small graphs only.

inline void bron_kerbosch(const std::vector<std::vector<uint8_t>>& adj,
                          std::vector<int>& R, std::vector<int> P, std::vector<int> X,
                          std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    int pivot = -1, best = -1;
    auto consider = [&](int u) {
        int cnt = 0;
        for (int v : P)
            if (adj[u][v]) ++cnt;
        if (cnt > best) {
            best = cnt;
            pivot = u;
        }
    };
    for (int u : P) consider(u);
    for (int u : X) consider(u);
    std::vector<int> ext;
    for (int v : P)
        if (!adj[pivot][v]) ext.push_back(v);
    for (int v : ext) {
        std::vector<int> P2, X2;
        for (int u : P)
            if (adj[v][u]) P2.push_back(u);
        for (int u : X)
            if (adj[v][u]) X2.push_back(u);
        R.push_back(v);
        bron_kerbosch(adj, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
    }
}

inline std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<uint8_t>>& adj) {
    std::vector<int> R, P, X;
    for (size_t v = 0; v < adj.size(); ++v) P.push_back(static_cast<int>(v));
    std::vector<std::vector<int>> out;
    bron_kerbosch(adj, R, std::move(P), std::move(X), out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// The half-cube split of PJ(4,3) and the top-to-star automorphism of PJ(4,1)

/// The unique presentation of the PJ(4,3) vertex set as A_+ u A_- with
/// same-class intersection sizes in {4,2,0} and cross-class sizes in {3,1},
/// together with the automorphisms of PJ(4,1) carrying every top to a star
/// whose second component lies in the indicated class.
struct HalfcubeSplit {
    std::vector<SignedSet> a_plus, a_minus; // PJ(4,3) vertices by parity of negative entries
    std::vector<int> g_to_plus;             // tops -> stars S(p_u, U), U in A_+
    std::vector<int> g_to_minus;            // tops -> stars S(p_u, U), U in A_-
};

namespace detail {

// graph on one parity class with edges at intersection size 2
inline AbstractGraph class_graph(const std::vector<SignedSet>& cls) {
    AbstractGraph g;
    g.name = "Gamma_delta";
    g.labels = cls;
    std::sort(g.labels.begin(), g.labels.end());
    const int m = g.size();
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (ss_inter_size(g.labels[a], g.labels[b]) == 2)
                g.adj[a][b] = g.adj[b][a] = 1;
    return g;
}

inline std::vector<int> build_g(const AbstractGraph& pj41, const AbstractGraph& pj40,
                                const AbstractGraph& gamma_other) {
    IsoResult iso = find_isomorphism(pj40, gamma_other);
    if (iso.status != IsoStatus::Found)
        throw std::logic_error("PJ(4,0) is not isomorphic to the class graph");
    std::vector<int> g(pj41.size(), -1);
    for (int v = 0; v < pj41.size(); ++v) {
        const SignedSet& line = pj41.labels[v];
        int i = pj40.vertex_id(SignedSet::of({line.elems[0]}));
        int j = pj40.vertex_id(SignedSet::of({line.elems[1]}));
        const SignedSet& hi = gamma_other.labels[iso.mapping[i]];
        const SignedSet& hj = gamma_other.labels[iso.mapping[j]];
        std::vector<int> inter;
        for (int x : hi.elems)
            if (hj.contains(x)) inter.push_back(x);
        if (inter.size() != 2)
            throw std::logic_error("h-images of adjacent points meet in the wrong dimension");
        g[v] = pj41.vertex_id(SignedSet::of(std::move(inter)));
        if (g[v] < 0) throw std::logic_error("g image is not a PJ(4,1) vertex");
    }
    // must be an automorphism
    std::vector<uint8_t> seen(pj41.size(), 0);
    for (int v : g) {
        if (seen[v]) throw std::logic_error("g is not a bijection");
        seen[v] = 1;
    }
    for (int a = 0; a < pj41.size(); ++a)
        for (int b = a + 1; b < pj41.size(); ++b)
            if (pj41.adj[a][b] != pj41.adj[g[a]][g[b]])
                throw std::logic_error("g does not preserve adjacency");
    return g;
}

} // namespace detail

inline HalfcubeSplit halfcube_split_and_g() {
    AbstractGraph pj43 = build_pj(4, 3);
    AbstractGraph pj41 = build_pj(4, 1);
    AbstractGraph pj40 = build_pj(4, 0);
    HalfcubeSplit out;
    for (const auto& v : pj43.labels) {
        int negs = 0;
        for (int x : v.elems)
            if (x < 0) ++negs;
        (negs % 2 == 0 ? out.a_plus : out.a_minus).push_back(v);
    }
    // verify: this parity split realizes the intersection-size pattern
    auto check_sizes = [&](const std::vector<SignedSet>& a, const std::vector<SignedSet>& b,
                           std::vector<int> allowed) {
        for (const auto& x : a)
            for (const auto& y : b) {
                if (x == y) continue;
                int s = ss_inter_size(x, y);
                if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
                    throw std::logic_error("half-cube split intersection pattern violated");
            }
    };
    check_sizes(out.a_plus, out.a_plus, {4, 2, 0});
    check_sizes(out.a_minus, out.a_minus, {4, 2, 0});
    check_sizes(out.a_plus, out.a_minus, {3, 1});

    AbstractGraph gp = detail::class_graph(out.a_plus);
    AbstractGraph gm = detail::class_graph(out.a_minus);
    // h into A_-delta yields g with tops landing on stars over A_delta
    out.g_to_plus = detail::build_g(pj41, pj40, gm);
    out.g_to_minus = detail::build_g(pj41, pj40, gp);

    // verify the top-to-star behaviour of both maps
    PJCliques cliques = pj_cliques(pj41);
    auto verify = [&](const std::vector<int>& g, const std::vector<SignedSet>& cls) {
        for (const auto& top : cliques.top_members) {
            std::vector<SignedSet> img;
            for (int v : top) img.push_back(pj41.labels[g[v]]);
            // a star S(p_u, U): all members share one point and their union is U
            std::vector<int> common = img[0].elems;
            std::vector<int> uni = img[0].elems;
            for (size_t i = 1; i < img.size(); ++i) {
                std::vector<int> c2;
                for (int x : common)
                    if (img[i].contains(x)) c2.push_back(x);
                common = std::move(c2);
                for (int x : img[i].elems)
                    if (std::find(uni.begin(), uni.end(), x) == uni.end()) uni.push_back(x);
            }
            if (common.size() != 1)
                throw std::logic_error("top image is not a star: no common point");
            SignedSet u = SignedSet::of(uni);
            if (std::find(cls.begin(), cls.end(), u) == cls.end())
                throw std::logic_error("top image star lies in the wrong half-cube class");
        }
    };
    verify(out.g_to_plus, out.a_plus);
    verify(out.g_to_minus, out.a_minus);
    return out;
}

} // namespace polaris
