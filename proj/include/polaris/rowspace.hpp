#pragma once

#include "polaris/gf.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polaris {

using Vec = std::vector<uint32_t>;
using Matrix = std::vector<Vec>;

/// A vector subspace of GF(p)^ambient held as its canonical reduced
/// row-echelon basis: pivot entries 1, strictly increasing pivot columns,
/// zeros above and below every pivot. Two RowSpaces describe the same
/// subspace exactly when their row lists are equal, so operator== is the
/// subspace equality test.
struct RowSpace {
    int ambient = 0;
    uint32_t p = 2;
    Matrix rows; // canonical RREF, no zero rows

    int rank() const { return static_cast<int>(rows.size()); }
    int proj_dim() const { return rank() - 1; }
    bool empty() const { return rows.empty(); }

    friend bool operator==(const RowSpace& a, const RowSpace& b) {
        return a.ambient == b.ambient && a.p == b.p && a.rows == b.rows;
    }
    friend bool operator<(const RowSpace& a, const RowSpace& b) {
        if (a.ambient != b.ambient) return a.ambient < b.ambient;
        if (a.p != b.p) return a.p < b.p;
        return a.rows < b.rows;
    }
};

namespace detail {

// In-place RREF. Pivots are searched in the first pivot_cols columns; row
// operations run over the full row width (so augmented blocks track the
// transform). Returns the rank; rows beyond it are zero in the pivot block.
inline int rref_in_place(Matrix& m, uint32_t p, int pivot_cols) {
    int r = 0;
    const int nrows = static_cast<int>(m.size());
    const int width = nrows ? static_cast<int>(m[0].size()) : 0;
    for (int c = 0; c < pivot_cols && r < nrows; ++c) {
        int piv = -1;
        for (int i = r; i < nrows; ++i)
            if (m[i][c]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        if (m[r][c] != 1) {
            uint32_t inv = gf_inv(m[r][c], p);
            for (int j = 0; j < width; ++j) m[r][j] = gf_mul(m[r][j], inv, p);
        }
        for (int i = 0; i < nrows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            uint32_t f = m[i][c];
            for (int j = 0; j < width; ++j)
                m[i][j] = gf_sub(m[i][j], gf_mul(f, m[r][j], p), p);
        }
        ++r;
    }
    return r;
}

} // namespace detail

/// Canonical RREF basis of the span of the given rows.
inline RowSpace rref_canonical(Matrix rows, uint32_t p, int ambient) {
    require_prime(p);
    if (ambient < 0) throw std::invalid_argument("negative ambient dimension");
    for (auto& row : rows) {
        if (static_cast<int>(row.size()) != ambient)
            throw std::invalid_argument("row length does not match ambient dimension");
        for (auto& x : row) x %= p;
    }
    int r = detail::rref_in_place(rows, p, ambient);
    rows.resize(r);
    return RowSpace{ambient, p, std::move(rows)};
}

inline RowSpace zero_space(uint32_t p, int ambient) {
    return RowSpace{ambient, p, {}};
}

inline RowSpace full_space(uint32_t p, int ambient) {
    Matrix id(ambient, Vec(ambient, 0));
    for (int i = 0; i < ambient; ++i) id[i][i] = 1;
    return RowSpace{ambient, p, std::move(id)};
}

namespace detail {

inline void require_compatible(const RowSpace& a, const RowSpace& b) {
    if (a.ambient != b.ambient)
        throw std::invalid_argument("ambient dimension mismatch");
    if (a.p != b.p)
        throw std::invalid_argument("field modulus mismatch");
}

} // namespace detail

/// Reduce v against the canonical rows of a; the residual is zero iff
/// v lies in the subspace.
inline Vec reduce_against(const RowSpace& a, Vec v) {
    const uint32_t p = a.p;
    for (const auto& row : a.rows) {
        int pc = 0;
        while (row[pc] == 0) ++pc; // pivot column; rows are canonical
        if (v[pc]) {
            uint32_t f = v[pc];
            for (int j = pc; j < a.ambient; ++j)
                v[j] = gf_sub(v[j], gf_mul(f, row[j], p), p);
        }
    }
    return v;
}

inline bool member(const RowSpace& a, const Vec& v) {
    Vec r = reduce_against(a, v);
    return std::all_of(r.begin(), r.end(), [](uint32_t x) { return x == 0; });
}

inline bool contains(const RowSpace& a, const RowSpace& b) {
    detail::require_compatible(a, b);
    for (const auto& row : b.rows)
        if (!member(a, row)) return false;
    return true;
}

inline RowSpace join(const RowSpace& a, const RowSpace& b) {
    detail::require_compatible(a, b);
    Matrix m = a.rows;
    m.insert(m.end(), b.rows.begin(), b.rows.end());
    return rref_canonical(std::move(m), a.p, a.ambient);
}

/// Exact intersection via the Zassenhaus block trick: reduce
/// [A | A; B | 0] and read the intersection off the rows whose left half
/// vanished. Cost is one elimination on a (rank a + rank b) x 2d matrix,
/// so high-rank meets in ambient dimension 14 stay cheap.
inline RowSpace meet(const RowSpace& a, const RowSpace& b) {
    detail::require_compatible(a, b);
    const int d = a.ambient;
    Matrix block;
    block.reserve(a.rows.size() + b.rows.size());
    for (const auto& u : a.rows) {
        Vec row(2 * d, 0);
        std::copy(u.begin(), u.end(), row.begin());
        std::copy(u.begin(), u.end(), row.begin() + d);
        block.push_back(std::move(row));
    }
    for (const auto& v : b.rows) {
        Vec row(2 * d, 0);
        std::copy(v.begin(), v.end(), row.begin());
        block.push_back(std::move(row));
    }
    int r = detail::rref_in_place(block, a.p, 2 * d);
    Matrix inter;
    for (int i = 0; i < r; ++i) {
        bool left_zero = true;
        for (int j = 0; j < d; ++j)
            if (block[i][j]) { left_zero = false; break; }
        if (left_zero)
            inter.emplace_back(block[i].begin() + d, block[i].end());
    }
    return rref_canonical(std::move(inter), a.p, d);
}

inline std::pair<RowSpace, RowSpace> meet_join(const RowSpace& a, const RowSpace& b) {
    return {meet(a, b), join(a, b)};
}

/// Kernel of the linear map x -> M x^T, i.e. { x : sum_j M[i][j] x[j] = 0 }.
inline RowSpace kernel(const Matrix& m, uint32_t p, int ambient) {
    Matrix work = m;
    for (auto& row : work) {
        if (static_cast<int>(row.size()) != ambient)
            throw std::invalid_argument("kernel: row length mismatch");
        for (auto& x : row) x %= p;
    }
    int r = detail::rref_in_place(work, p, ambient);
    work.resize(r);
    std::vector<int> pivot_col(r);
    std::vector<bool> is_pivot(ambient, false);
    for (int i = 0; i < r; ++i) {
        int c = 0;
        while (work[i][c] == 0) ++c;
        pivot_col[i] = c;
        is_pivot[c] = true;
    }
    Matrix basis;
    for (int f = 0; f < ambient; ++f) {
        if (is_pivot[f]) continue;
        Vec v(ambient, 0);
        v[f] = 1;
        for (int i = 0; i < r; ++i)
            v[pivot_col[i]] = gf_neg(work[i][f], p);
        basis.push_back(std::move(v));
    }
    return rref_canonical(std::move(basis), p, ambient);
}

/// Coordinates of x in the given (independent) basis rows, or nullopt if x
/// is outside their span.
inline std::optional<Vec> express_in_basis(const Matrix& basis, const Vec& x,
                                           uint32_t p, int ambient) {
    const int r = static_cast<int>(basis.size());
    // Eliminate [basis | I] so the transform back to the original rows is
    // carried along.
    Matrix aug;
    aug.reserve(r);
    for (int i = 0; i < r; ++i) {
        Vec row(ambient + r, 0);
        for (int j = 0; j < ambient; ++j) row[j] = basis[i][j] % p;
        row[ambient + i] = 1;
        aug.push_back(std::move(row));
    }
    int rk = detail::rref_in_place(aug, p, ambient); // eliminate on the left block only
    if (rk != r) throw std::invalid_argument("express_in_basis: rows are dependent");
    Vec residual = x;
    for (auto& e : residual) e %= p;
    Vec coeff_canon(r, 0);
    for (int i = 0; i < r; ++i) {
        int c = 0;
        while (aug[i][c] == 0) ++c;
        uint32_t f = residual[c];
        coeff_canon[i] = f;
        if (f) {
            for (int j = 0; j < ambient; ++j)
                residual[j] = gf_sub(residual[j], gf_mul(f, aug[i][j], p), p);
        }
    }
    if (!std::all_of(residual.begin(), residual.end(), [](uint32_t v) { return v == 0; }))
        return std::nullopt;
    // coeff_canon solves against the reduced rows; map back through the
    // recorded transform T (aug right block): y = coeff_canon * T.
    Vec y(r, 0);
    for (int i = 0; i < r; ++i) {
        if (!coeff_canon[i]) continue;
        for (int j = 0; j < r; ++j)
            y[j] = gf_add(y[j], gf_mul(coeff_canon[i], aug[i][ambient + j], p), p);
    }
    return y;
}

/// All projective points of the subspace: one normalized representative
/// (first nonzero coordinate 1) per 1-dimensional subspace, in lexicographic
/// order of coefficient vectors.
inline std::vector<Vec> projective_points(const RowSpace& s) {
    std::vector<Vec> out;
    const int r = s.rank();
    if (r == 0) return out;
    const uint32_t p = s.p;
    Vec coef(r, 0);
    // iterate all coefficient vectors whose first nonzero entry is 1
    auto emit = [&]() {
        Vec v(s.ambient, 0);
        for (int i = 0; i < r; ++i) {
            if (!coef[i]) continue;
            for (int j = 0; j < s.ambient; ++j)
                v[j] = gf_add(v[j], gf_mul(coef[i], s.rows[i][j], p), p);
        }
        out.push_back(std::move(v));
    };
    for (int lead = r - 1; lead >= 0; --lead) {
        std::fill(coef.begin(), coef.end(), 0);
        coef[lead] = 1;
        // vary positions lead+1..r-1 over all of GF(p)
        while (true) {
            emit();
            int i = r - 1;
            while (i > lead && coef[i] == p - 1) coef[i--] = 0;
            if (i == lead) break;
            ++coef[i];
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace polaris
