#pragma once

#include "polaris/rowspace.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polaris {

enum class FormKind { Symplectic, Hyperbolic, Parabolic, Derived };

inline const char* form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::Symplectic: return "symplectic";
        case FormKind::Hyperbolic: return "hyperbolic";
        case FormKind::Parabolic: return "parabolic";
        case FormKind::Derived: return "derived";
    }
    return "?";
}

/// Parameters of a classical form: symplectic (C_n), hyperbolic orthogonal
/// (D_n, Q = sum x_i y_i) or parabolic orthogonal (B_n, Q = x_0^2 + sum x_i y_i).
struct FormSpec {
    FormKind kind = FormKind::Symplectic;
    int rank = 2;
    uint32_t p = 2;

    int ambient() const {
        return kind == FormKind::Parabolic ? 2 * rank + 1 : 2 * rank;
    }
};

/// A finite classical polar space: the form data, the registry of singular
/// projective points (normalized, lexicographically ordered) and the
/// collinearity oracle. Immutable after construction.
struct PolarSpace {
    uint32_t p = 2;
    int ambient = 0;
    int rank = 0;
    FormKind kind = FormKind::Symplectic;
    bool has_quad = false;
    Matrix gram;            // polarized bilinear form, ambient x ambient
    Matrix quad;            // upper triangular quadratic coefficients (if has_quad)
    std::vector<Vec> points;

    size_t point_count() const { return points.size(); }

    uint32_t bilinear(const Vec& u, const Vec& v) const {
        uint64_t acc = 0;
        for (int i = 0; i < ambient; ++i) {
            if (!u[i]) continue;
            uint64_t row = 0;
            for (int j = 0; j < ambient; ++j)
                if (gram[i][j] && v[j]) row += uint64_t(gram[i][j]) * v[j];
            acc += u[i] * (row % p);
        }
        return static_cast<uint32_t>(acc % p);
    }

    uint32_t quad_eval(const Vec& v) const {
        uint64_t acc = 0;
        for (int i = 0; i < ambient; ++i) {
            if (!v[i]) continue;
            for (int j = i; j < ambient; ++j)
                if (quad[i][j] && v[j]) acc += uint64_t(quad[i][j]) * v[i] % p * v[j];
        }
        return static_cast<uint32_t>(acc % p);
    }

    // A nonzero vector is a point of the space iff it is singular: for the
    // symplectic kind every nonzero vector qualifies.
    bool singular_vec(const Vec& v) const {
        return has_quad ? quad_eval(v) == 0 : true;
    }

    Vec normalize(Vec v) const {
        int lead = -1;
        for (int i = 0; i < ambient; ++i)
            if (v[i]) { lead = i; break; }
        if (lead < 0) throw std::invalid_argument("cannot normalize the zero vector");
        if (v[lead] != 1) {
            uint32_t inv = gf_inv(v[lead], p);
            for (auto& x : v) x = gf_mul(x, inv, p);
        }
        return v;
    }

    int point_id(const Vec& v) const {
        Vec n = normalize(v);
        auto it = std::lower_bound(points.begin(), points.end(), n);
        if (it == points.end() || *it != n) return -1;
        return static_cast<int>(it - points.begin());
    }

    bool collinear_vec(const Vec& u, const Vec& v) const {
        return bilinear(u, v) == 0;
    }

    /// Collinearity of two distinct registered points. Querying a point
    /// against itself is a caller error: subspace-level X perp Y handling
    /// treats a point as perpendicular to itself explicitly.
    bool collinear(int a, int b) const {
        check_point(a);
        check_point(b);
        if (a == b) throw std::invalid_argument("collinear(a,a) is undefined; points are perp to themselves by convention");
        return collinear_vec(points[a], points[b]);
    }

    void check_point(int id) const {
        if (id < 0 || id >= static_cast<int>(points.size()))
            throw std::out_of_range("point id out of range");
    }
};

namespace detail {

inline void enumerate_registry(PolarSpace& s) {
    // Lexicographic sweep over all vectors keeps the registry sorted without
    // an extra pass.
    Vec v(s.ambient, 0);
    while (true) {
        int i = s.ambient - 1;
        while (i >= 0 && v[i] == s.p - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
        int lead = 0;
        while (v[lead] == 0) ++lead;
        if (v[lead] != 1) continue; // only normalized representatives
        if (s.singular_vec(v)) s.points.push_back(v);
    }
}

inline Matrix polarize(const Matrix& quad, uint32_t p, int d) {
    Matrix g(d, Vec(d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            if (!quad[i][j]) continue;
            g[i][j] = gf_add(g[i][j], quad[i][j], p);
            g[j][i] = gf_add(g[j][i], quad[i][j], p);
        }
    return g;
}

} // namespace detail

inline bool is_singular_subspace(const PolarSpace& s, const RowSpace& x) {
    for (size_t i = 0; i < x.rows.size(); ++i) {
        if (s.has_quad && s.quad_eval(x.rows[i]) != 0) return false;
        for (size_t j = i + 1; j < x.rows.size(); ++j)
            if (s.bilinear(x.rows[i], x.rows[j]) != 0) return false;
    }
    return true;
}

/// A totally singular subspace presented by its canonical row space;
/// the elements of the Grassmannians this library works with.
struct SingularSubspace {
    RowSpace space;
    int proj_dim() const { return space.proj_dim(); }
};

inline SingularSubspace make_singular(const PolarSpace& s, RowSpace x) {
    if (x.ambient != s.ambient || x.p != s.p)
        throw std::invalid_argument("subspace does not live in this polar space");
    if (!is_singular_subspace(s, x))
        throw std::invalid_argument("subspace is not totally singular");
    if (x.proj_dim() > s.rank - 1)
        throw std::invalid_argument("singular subspace exceeds the rank bound");
    return SingularSubspace{std::move(x)};
}

inline RowSpace span_of_points(const PolarSpace& s, const std::vector<int>& ids) {
    Matrix m;
    m.reserve(ids.size());
    for (int id : ids) {
        s.check_point(id);
        m.push_back(s.points[id]);
    }
    return rref_canonical(std::move(m), s.p, s.ambient);
}

namespace detail {

// Greedy maximal singular subspace through `seed`, choosing the
// lexicographically smallest admissible point at every step. Also reports
// the extending point ids when `added` is non-null.
inline RowSpace greedy_max_singular(const PolarSpace& s, RowSpace seed,
                                    std::vector<int>* added = nullptr) {
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t q = 0; q < s.points.size(); ++q) {
            const Vec& v = s.points[q];
            bool perp = true;
            for (const auto& row : seed.rows)
                if (s.bilinear(row, v) != 0) { perp = false; break; }
            if (!perp || member(seed, v)) continue;
            Matrix m = seed.rows;
            m.push_back(v);
            seed = rref_canonical(std::move(m), s.p, s.ambient);
            if (added) added->push_back(static_cast<int>(q));
            grew = true;
            break;
        }
    }
    return seed;
}

} // namespace detail

inline PolarSpace build_polar_space(FormKind kind, int n, uint32_t p) {
    require_prime(p);
    if (n < 2) throw std::invalid_argument("polar space rank must be at least 2");
    if (kind == FormKind::Parabolic && p == 2)
        throw std::invalid_argument("parabolic orthogonal space requires odd characteristic");
    if (kind == FormKind::Derived)
        throw std::invalid_argument("derived spaces are built through quotients/restrictions");

    PolarSpace s;
    s.p = p;
    s.kind = kind;
    s.rank = n;
    FormSpec spec{kind, n, p};
    s.ambient = spec.ambient();

    if (kind == FormKind::Symplectic) {
        s.has_quad = false;
        s.gram.assign(s.ambient, Vec(s.ambient, 0));
        for (int i = 0; i < n; ++i) {
            s.gram[2 * i][2 * i + 1] = 1;
            s.gram[2 * i + 1][2 * i] = p - 1;
        }
    } else {
        s.has_quad = true;
        s.quad.assign(s.ambient, Vec(s.ambient, 0));
        if (kind == FormKind::Hyperbolic) {
            for (int i = 0; i < n; ++i) s.quad[2 * i][2 * i + 1] = 1;
        } else {
            s.quad[0][0] = 1;
            for (int i = 0; i < n; ++i) s.quad[2 * i + 1][2 * i + 2] = 1;
        }
        s.gram = detail::polarize(s.quad, p, s.ambient);
    }

    detail::enumerate_registry(s);

    // The hyperbolic-pair construction guarantees rank n; assert it anyway
    // so a bad form matrix cannot slip through silently.
    RowSpace maximal = detail::greedy_max_singular(s, zero_space(p, s.ambient));
    if (maximal.rank() != n)
        throw std::logic_error("polar space rank check failed");
    return s;
}

/// Restriction of the form to the row span of `basis`: the coordinates are
/// taken with respect to the given rows. Used for perp-restrictions and
/// quotients; the caller supplies the rank of the resulting space.
inline PolarSpace build_derived_space(const PolarSpace& parent, const Matrix& basis, int rank) {
    PolarSpace s;
    s.p = parent.p;
    s.kind = FormKind::Derived;
    s.rank = rank;
    s.ambient = static_cast<int>(basis.size());
    s.has_quad = parent.has_quad;
    s.gram.assign(s.ambient, Vec(s.ambient, 0));
    for (int i = 0; i < s.ambient; ++i)
        for (int j = 0; j < s.ambient; ++j)
            s.gram[i][j] = parent.bilinear(basis[i], basis[j]);
    if (parent.has_quad) {
        s.quad.assign(s.ambient, Vec(s.ambient, 0));
        for (int i = 0; i < s.ambient; ++i) {
            s.quad[i][i] = parent.quad_eval(basis[i]);
            for (int j = i + 1; j < s.ambient; ++j)
                s.quad[i][j] = parent.bilinear(basis[i], basis[j]);
        }
    }
    detail::enumerate_registry(s);
    return s;
}

// ---------------------------------------------------------------------------
// Perp sets

/// { q in P : q perp x for all x in xs }, counting q perp q as true.
inline std::vector<int> perp_set(const PolarSpace& s, const std::vector<int>& xs) {
    if (xs.empty()) throw std::invalid_argument("perp_set of an empty set");
    for (int id : xs) s.check_point(id);
    std::vector<int> out;
    for (size_t q = 0; q < s.points.size(); ++q) {
        bool ok = true;
        for (int x : xs) {
            if (static_cast<int>(q) == x) continue;
            if (!s.collinear_vec(s.points[q], s.points[x])) { ok = false; break; }
        }
        if (ok) out.push_back(static_cast<int>(q));
    }
    return out;
}

/// The vector subspace { v : f(v, x) = 0 for all x in xs } (not only points).
inline RowSpace perp_subspace(const PolarSpace& s, const Matrix& xs) {
    Matrix conditions;
    conditions.reserve(xs.size());
    for (const auto& x : xs) {
        Vec row(s.ambient, 0);
        for (int j = 0; j < s.ambient; ++j) {
            uint64_t acc = 0;
            for (int i = 0; i < s.ambient; ++i)
                if (x[i] && s.gram[i][j]) acc += uint64_t(x[i]) * s.gram[i][j];
            row[j] = static_cast<uint32_t>(acc % s.p);
        }
        conditions.push_back(std::move(row));
    }
    return kernel(conditions, s.p, s.ambient);
}

// ---------------------------------------------------------------------------
// Grassmannian enumeration

/// All totally singular subspaces of projective dimension k, canonically
/// ordered. Complete and duplicate-free; intended for small parameters --
/// the verification pipelines accept explicit subspace sets instead.
inline std::vector<RowSpace> enumerate_singular(const PolarSpace& s, int k) {
    if (k < 0 || k > s.rank - 1)
        throw std::invalid_argument("singular dimension out of range");
    std::vector<RowSpace> cur;
    cur.reserve(s.points.size());
    for (const auto& v : s.points)
        cur.push_back(rref_canonical({v}, s.p, s.ambient));
    // level sets: extend by one perpendicular point at a time, dedup on the
    // canonical form
    for (int dim = 1; dim <= k; ++dim) {
        std::vector<RowSpace> next;
        for (const auto& sp : cur) {
            for (const auto& v : s.points) {
                bool perp = true;
                for (const auto& row : sp.rows)
                    if (s.bilinear(row, v) != 0) { perp = false; break; }
                if (!perp || member(sp, v)) continue;
                Matrix m = sp.rows;
                m.push_back(v);
                next.push_back(rref_canonical(std::move(m), s.p, s.ambient));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Frames

/// 2l distinct points with the fixed-point-free involution sigma such that
/// non-collinearity holds exactly on sigma-pairs. Stored in paired order:
/// sigma(2i) = 2i+1.
struct Frame {
    std::vector<int> points;

    int pair_count() const { return static_cast<int>(points.size()) / 2; }
    int sigma(int i) const { return i ^ 1; }
    int point(int i) const { return points[i]; }
    // positive label a (1-based) <-> slot 2(a-1); negative -> slot 2(a-1)+1
    int slot_of_label(int lab) const {
        int a = lab > 0 ? lab : -lab;
        return 2 * (a - 1) + (lab > 0 ? 0 : 1);
    }
};

inline bool validate_frame(const PolarSpace& s, const Frame& f, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int m = static_cast<int>(f.points.size());
    if (m == 0 || m % 2) return fail("frame must have an even, positive number of points");
    if (f.pair_count() > s.rank) return fail("frame has more pairs than the rank allows");
    for (int i = 0; i < m; ++i) {
        s.check_point(f.points[i]);
        for (int j = i + 1; j < m; ++j)
            if (f.points[i] == f.points[j]) return fail("frame points are not distinct");
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            bool col = s.collinear(f.points[i], f.points[j]);
            bool expect = (j != (i ^ 1));
            if (col != expect)
                return fail("collinearity pattern broken at slots " + std::to_string(i) + "," + std::to_string(j));
        }
    return true;
}

/// Builds a Frame from an arbitrary point set with an explicit involution
/// sigma (given as the paired index for each position), normalizing into
/// paired slot order.
inline Frame make_frame(const PolarSpace& s, const std::vector<int>& pts,
                        const std::vector<int>& sigma) {
    if (pts.size() != sigma.size())
        throw std::invalid_argument("sigma length mismatch");
    const int m = static_cast<int>(pts.size());
    std::vector<bool> used(m, false);
    Frame f;
    for (int i = 0; i < m; ++i) {
        if (used[i]) continue;
        int j = sigma[i];
        if (j < 0 || j >= m || j == i || sigma[j] != i)
            throw std::invalid_argument("sigma is not a fixed-point-free involution");
        used[i] = used[j] = true;
        f.points.push_back(pts[i]);
        f.points.push_back(pts[j]);
    }
    std::string why;
    if (!validate_frame(s, f, &why))
        throw std::invalid_argument("invalid frame: " + why);
    return f;
}

/// The frame {e_1, f_1, ..., e_n, f_n} carried by the hyperbolic basis of a
/// form-built space.
inline Frame standard_frame(const PolarSpace& s) {
    if (s.kind == FormKind::Derived)
        throw std::invalid_argument("standard_frame requires a form-built space");
    Frame f;
    for (int i = 0; i < s.rank; ++i) {
        int ce = (s.kind == FormKind::Parabolic) ? 2 * i + 1 : 2 * i;
        int cf = ce + 1;
        Vec e(s.ambient, 0), ff(s.ambient, 0);
        e[ce] = 1;
        ff[cf] = 1;
        int ide = s.point_id(e), idf = s.point_id(ff);
        if (ide < 0 || idf < 0) throw std::logic_error("hyperbolic basis vector missing from registry");
        f.points.push_back(ide);
        f.points.push_back(idf);
    }
    return f;
}

namespace detail {

// Completes `leftover` (pairwise collinear points) to a full frame of s by
// the textbook hyperbolic-pair construction: extend to a maximal singular
// subspace point-by-point, then scan for each dual point. All choices are
// lexicographically first, so the output is deterministic.
inline std::vector<int> complete_frame_in(const PolarSpace& s, const std::vector<int>& leftover) {
    std::vector<int> a = leftover;
    RowSpace m1 = span_of_points(s, leftover);
    if (m1.rank() != static_cast<int>(leftover.size()))
        throw std::invalid_argument("frame seed points are dependent");
    m1 = greedy_max_singular(s, m1, &a);
    if (m1.rank() != s.rank)
        throw std::logic_error("could not extend to a maximal singular subspace");
    const int r = s.rank;
    std::vector<int> b(r, -1);
    for (int t = 0; t < r; ++t) {
        for (size_t q = 0; q < s.points.size(); ++q) {
            const Vec& v = s.points[q];
            bool ok = s.bilinear(s.points[a[t]], v) != 0;
            for (int j = 0; ok && j < r; ++j)
                if (j != t && s.bilinear(s.points[a[j]], v) != 0) ok = false;
            for (int j = 0; ok && j < t; ++j)
                if (s.bilinear(s.points[b[j]], v) != 0) ok = false;
            if (ok) { b[t] = static_cast<int>(q); break; }
        }
        if (b[t] < 0) throw std::logic_error("hyperbolic partner scan failed");
    }
    std::vector<int> out;
    for (int t = 0; t < r; ++t) {
        out.push_back(a[t]);
        out.push_back(b[t]);
    }
    return out;
}

} // namespace detail

/// A frame built from scratch by the greedy hyperbolic-pair procedure;
/// works on derived spaces where no standard basis is available.
inline Frame greedy_frame(const PolarSpace& s) {
    Frame f;
    f.points = detail::complete_frame_in(s, {});
    std::string why;
    if (!validate_frame(s, f, &why)) throw std::logic_error("greedy frame invalid: " + why);
    return f;
}

/// Frame extension: X, Y point sets with |Y| <= |X| <= n, X perp X,
/// Y perp Y, and every y in Y non-collinear with exactly one x in X.
/// Returns a frame containing X and Y. The construction restricts to the
/// rank n-v space perpendicular to the matched pairs, extends the leftover
/// x's to a maximal singular subspace there and builds hyperbolic pairs.
inline Frame extend_to_frame(const PolarSpace& s, const std::vector<int>& X,
                             const std::vector<int>& Y) {
    auto bad = [](const std::string& msg) { throw std::invalid_argument("extend_to_frame: " + msg); };
    if (Y.size() > X.size()) bad("|Y| exceeds |X|");
    if (static_cast<int>(X.size()) > s.rank) bad("|X| exceeds the rank");
    for (size_t i = 0; i < X.size(); ++i)
        for (size_t j = i + 1; j < X.size(); ++j) {
            if (X[i] == X[j]) bad("duplicate point in X");
            if (!s.collinear(X[i], X[j]))
                bad("X is not pairwise collinear at (" + std::to_string(X[i]) + "," + std::to_string(X[j]) + ")");
        }
    for (size_t i = 0; i < Y.size(); ++i)
        for (size_t j = i + 1; j < Y.size(); ++j) {
            if (Y[i] == Y[j]) bad("duplicate point in Y");
            if (!s.collinear(Y[i], Y[j]))
                bad("Y is not pairwise collinear at (" + std::to_string(Y[i]) + "," + std::to_string(Y[j]) + ")");
        }
    std::vector<int> partner(Y.size(), -1);
    std::vector<bool> x_taken(X.size(), false);
    for (size_t yi = 0; yi < Y.size(); ++yi) {
        int hits = 0;
        for (size_t xi = 0; xi < X.size(); ++xi) {
            if (X[xi] == Y[yi]) bad("X and Y share a point");
            if (!s.collinear(X[xi], Y[yi])) {
                ++hits;
                partner[yi] = static_cast<int>(xi);
            }
        }
        if (hits != 1)
            bad("y=" + std::to_string(Y[yi]) + " has " + std::to_string(hits) + " non-collinear partners in X");
        if (x_taken[partner[yi]])
            bad("two points of Y pair with x=" + std::to_string(X[partner[yi]]));
        x_taken[partner[yi]] = true;
    }

    if (X.empty() && Y.empty())
        return s.kind == FormKind::Derived ? greedy_frame(s) : standard_frame(s);

    // matched hyperbolic pairs and the leftover x's
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> leftover;
    for (size_t yi = 0; yi < Y.size(); ++yi)
        pairs.emplace_back(X[partner[yi]], Y[yi]);
    for (size_t xi = 0; xi < X.size(); ++xi)
        if (!x_taken[xi]) leftover.push_back(X[xi]);

    Frame f;
    std::vector<int> tail; // frame points found in the restriction
    if (static_cast<int>(pairs.size()) == s.rank) {
        // nothing left to extend
        for (auto [x, y] : pairs) {
            f.points.push_back(x);
            f.points.push_back(y);
        }
    } else {
        Matrix fixed;
        for (auto [x, y] : pairs) {
            fixed.push_back(s.points[x]);
            fixed.push_back(s.points[y]);
        }
        RowSpace w = pairs.empty() ? full_space(s.p, s.ambient) : perp_subspace(s, fixed);
        PolarSpace rest = build_derived_space(s, w.rows, s.rank - static_cast<int>(pairs.size()));
        std::vector<int> rest_leftover;
        for (int x : leftover) {
            auto coords = express_in_basis(w.rows, s.points[x], s.p, s.ambient);
            if (!coords) throw std::logic_error("leftover point escaped the perp restriction");
            int rid = rest.point_id(*coords);
            if (rid < 0) throw std::logic_error("leftover point missing from restricted registry");
            rest_leftover.push_back(rid);
        }
        std::vector<int> rest_frame = detail::complete_frame_in(rest, rest_leftover);
        for (auto [x, y] : pairs) {
            f.points.push_back(x);
            f.points.push_back(y);
        }
        for (int rid : rest_frame) {
            // lift back: coordinates are with respect to the rows of w
            Vec v(s.ambient, 0);
            const Vec& z = rest.points[rid];
            for (int i = 0; i < rest.ambient; ++i) {
                if (!z[i]) continue;
                for (int j = 0; j < s.ambient; ++j)
                    v[j] = gf_add(v[j], gf_mul(z[i], w.rows[i][j], s.p), s.p);
            }
            int pid = s.point_id(v);
            if (pid < 0) throw std::logic_error("lifted frame point missing from registry");
            f.points.push_back(pid);
        }
    }
    std::string why;
    if (!validate_frame(s, f, &why))
        throw std::logic_error("extend_to_frame produced an invalid frame: " + why);
    return f;
}

// ---------------------------------------------------------------------------
// Quotients

/// The polar space on S^perp / S together with the incidence-preserving
/// correspondence between subspaces through S and subspaces of the quotient.
/// project(lift(Z)) == Z; both directions preserve collinearity.
struct QuotientSpace {
    PolarSpace space;   // the quotient, rank = parent rank - rank(S)
    RowSpace sub;       // S
    RowSpace wperp;     // S^perp in the parent
    Matrix comp;        // complement basis: S + comp spans S^perp
    uint32_t parent_p = 2;
    int parent_ambient = 0;

    /// Quotient image of a singular subspace containing S.
    RowSpace project(const RowSpace& x) const {
        if (!contains(x, sub))
            throw std::invalid_argument("project: subspace does not contain S");
        Matrix basis = sub.rows;
        basis.insert(basis.end(), comp.begin(), comp.end());
        Matrix img;
        for (const auto& row : x.rows) {
            auto coords = express_in_basis(basis, row, parent_p, parent_ambient);
            if (!coords)
                throw std::invalid_argument("project: subspace is not inside S^perp");
            img.emplace_back(coords->begin() + sub.rank(), coords->end());
        }
        return rref_canonical(std::move(img), parent_p, space.ambient);
    }

    RowSpace lift(const RowSpace& z) const {
        Matrix m = sub.rows;
        for (const auto& row : z.rows) {
            Vec v(parent_ambient, 0);
            for (int i = 0; i < space.ambient; ++i) {
                if (!row[i]) continue;
                for (int j = 0; j < parent_ambient; ++j)
                    v[j] = gf_add(v[j], gf_mul(row[i], comp[i][j], parent_p), parent_p);
            }
            m.push_back(std::move(v));
        }
        return rref_canonical(std::move(m), parent_p, parent_ambient);
    }

    int project_point_vec(const Vec& v) const {
        RowSpace x = rref_canonical({v}, parent_p, parent_ambient);
        RowSpace img = project(join(x, sub));
        if (img.rank() != 1)
            throw std::invalid_argument("vector does not project to a quotient point");
        return space.point_id(img.rows[0]);
    }

    Vec lift_point(int qid) const {
        space.check_point(qid);
        const Vec& z = space.points[qid];
        Vec v(parent_ambient, 0);
        for (int i = 0; i < space.ambient; ++i) {
            if (!z[i]) continue;
            for (int j = 0; j < parent_ambient; ++j)
                v[j] = gf_add(v[j], gf_mul(z[i], comp[i][j], parent_p), parent_p);
        }
        return v;
    }
};

inline QuotientSpace quotient_space(const PolarSpace& s, const RowSpace& S) {
    if (S.ambient != s.ambient || S.p != s.p)
        throw std::invalid_argument("quotient: subspace does not live in this space");
    if (!is_singular_subspace(s, S))
        throw std::invalid_argument("quotient: subspace is not totally singular");
    if (S.rank() > s.rank - 1)
        throw std::invalid_argument("quotient: rank would drop below 1");
    QuotientSpace q;
    q.sub = S;
    q.parent_p = s.p;
    q.parent_ambient = s.ambient;
    q.wperp = S.empty() ? full_space(s.p, s.ambient) : perp_subspace(s, S.rows);
    // complement: rows of S^perp that extend S, in canonical order
    RowSpace span = S;
    for (const auto& row : q.wperp.rows) {
        if (member(span, row)) continue;
        Matrix m = span.rows;
        m.push_back(row);
        span = rref_canonical(std::move(m), s.p, s.ambient);
        q.comp.push_back(row);
    }
    q.space = build_derived_space(s, q.comp, s.rank - S.rank());
    return q;
}

} // namespace polaris
