#pragma once

#include "fp.hpp"

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <vector>

namespace zpmact {

// A vector over F_p, entries reduced; the prime travels alongside.
using FpVec = std::vector<u32>;

inline bool is_zero_vec(const FpVec& v) {
    for (u32 x : v)
        if (x)
            return false;
    return true;
}

inline u32 dot(const FpVec& a, const FpVec& b, u32 p) {
    if (a.size() != b.size())
        throw error("dot: length mismatch");
    u64 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<u64>(a[i]) * b[i];
    return static_cast<u32>(acc % p);
}

inline FpVec add_vec(const FpVec& a, const FpVec& b, u32 p) {
    if (a.size() != b.size())
        throw error("add_vec: length mismatch");
    FpVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = add_mod(a[i], b[i], p);
    return r;
}

inline FpVec scale_vec(const FpVec& a, u32 c, u32 p) {
    FpVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = mul_mod(a[i], c, p);
    return r;
}

// a += c*b
inline void axpy(FpVec& a, u32 c, const FpVec& b, u32 p) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = add_mod(a[i], mul_mod(c, b[i], p), p);
}

struct FpMatrix {
    u32 p = 2;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<u32> e; // row-major

    FpMatrix() = default;

    FpMatrix(u32 prime, std::size_t r, std::size_t c)
        : p(prime), rows(r), cols(c), e(r * c, 0) {
        check_prime(prime);
    }

    FpMatrix(u32 prime, std::initializer_list<std::initializer_list<i64>> data)
        : p(prime) {
        check_prime(prime);
        rows = data.size();
        cols = rows ? data.begin()->size() : 0;
        e.reserve(rows * cols);
        for (const auto& row : data) {
            if (row.size() != cols)
                throw error("ragged matrix literal");
            for (i64 v : row)
                e.push_back(reduce_mod(v, prime));
        }
    }

    static FpMatrix identity(u32 prime, std::size_t n) {
        FpMatrix m(prime, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = 1;
        return m;
    }

    // rows may be empty, hence the explicit column count
    static FpMatrix from_rows(u32 prime, const std::vector<FpVec>& rs,
                              std::size_t c) {
        FpMatrix m(prime, rs.size(), c);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (rs[i].size() != c)
                throw error("from_rows: row length mismatch");
            for (std::size_t j = 0; j < c; ++j)
                m.at(i, j) = rs[i][j] % prime;
        }
        return m;
    }

    u32& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    u32 at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

    FpVec row_vec(std::size_t i) const {
        return FpVec(e.begin() + static_cast<std::ptrdiff_t>(i * cols),
                     e.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }

    FpVec col_vec(std::size_t j) const {
        FpVec v(rows);
        for (std::size_t i = 0; i < rows; ++i)
            v[i] = at(i, j);
        return v;
    }

    std::vector<FpVec> row_list() const {
        std::vector<FpVec> out;
        out.reserve(rows);
        for (std::size_t i = 0; i < rows; ++i)
            out.push_back(row_vec(i));
        return out;
    }

    FpMatrix transpose() const {
        FpMatrix t(p, cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                t.at(j, i) = at(i, j);
        return t;
    }

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
};

inline FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
    if (a.p != b.p)
        throw error("mat_mul: mixed moduli");
    if (a.cols != b.rows)
        throw error("mat_mul: dimension mismatch");
    FpMatrix c(a.p, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            u32 v = a.at(i, k);
            if (!v)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) =
                    add_mod(c.at(i, j), mul_mod(v, b.at(k, j), a.p), a.p);
        }
    return c;
}

// column convention: x -> Mx
inline FpVec mat_vec(const FpMatrix& m, const FpVec& x) {
    if (m.cols != x.size())
        throw error("mat_vec: dimension mismatch");
    FpVec y(m.rows, 0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j)
            acc += static_cast<u64>(m.at(i, j)) * x[j];
        y[i] = static_cast<u32>(acc % m.p);
    }
    return y;
}

inline FpVec vec_mat(const FpVec& x, const FpMatrix& m) {
    if (m.rows != x.size())
        throw error("vec_mat: dimension mismatch");
    FpVec y(m.cols, 0);
    for (std::size_t j = 0; j < m.cols; ++j) {
        u64 acc = 0;
        for (std::size_t i = 0; i < m.rows; ++i)
            acc += static_cast<u64>(x[i]) * m.at(i, j);
        y[j] = static_cast<u32>(acc % m.p);
    }
    return y;
}

struct Rref {
    FpMatrix mat;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots; // pivot column per pivot row
};

/* Gauss-Jordan over F_p.  Pivot choice is the first nonzero entry in column
 * order, pivots scaled to 1, eliminated above and below: the result is the
 * unique reduced row echelon form, so it doubles as a canonical label for
 * the row span.  Pivoting can be restricted to the first active_cols
 * columns; trailing columns are carried along (augmented systems). */
inline Rref rref(FpMatrix m,
                 std::size_t active_cols = std::numeric_limits<std::size_t>::max()) {
    if (active_cols > m.cols)
        active_cols = m.cols;
    Rref out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < active_cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, c) == 0)
            ++piv;
        if (piv == m.rows)
            continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m.at(piv, j), m.at(r, j));
        u32 inv = inv_mod(m.at(r, c), m.p);
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(r, j) = mul_mod(m.at(r, j), inv, m.p);
        for (std::size_t q = 0; q < m.rows; ++q) {
            if (q == r)
                continue;
            u32 f = m.at(q, c);
            if (!f)
                continue;
            for (std::size_t j = 0; j < m.cols; ++j)
                m.at(q, j) =
                    sub_mod(m.at(q, j), mul_mod(f, m.at(r, j), m.p), m.p);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    out.mat = std::move(m);
    return out;
}

inline std::size_t rank_of(const FpMatrix& m) { return rref(m).rank; }

/* Kernel of x -> Mx.  One basis vector per free column, in column order:
 * the standard basis attached to the rref, hence canonical. */
inline std::vector<FpVec> kernel_basis(const FpMatrix& m) {
    Rref r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t c : r.pivots)
        is_pivot[c] = true;
    std::vector<FpVec> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f])
            continue;
        FpVec x(m.cols, 0);
        x[f] = 1;
        for (std::size_t i = 0; i < r.rank; ++i)
            x[r.pivots[i]] = neg_mod(r.mat.at(i, f), m.p);
        basis.push_back(std::move(x));
    }
    return basis;
}

/* One solution of Ax = b with free variables set to 0, or nullopt if the
 * system is inconsistent. */
inline std::optional<FpVec> solve(const FpMatrix& a, const FpVec& b) {
    if (a.rows != b.size())
        throw error("solve: dimension mismatch");
    FpMatrix aug(a.p, a.rows, a.cols + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j)
            aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[i] % a.p;
    }
    Rref r = rref(std::move(aug), a.cols);
    for (std::size_t i = r.rank; i < a.rows; ++i)
        if (r.mat.at(i, a.cols) != 0)
            return std::nullopt;
    FpVec x(a.cols, 0);
    for (std::size_t i = 0; i < r.rank; ++i)
        x[r.pivots[i]] = r.mat.at(i, a.cols);
    return x;
}

// Inverse via [A | I]; nullopt when singular.
inline std::optional<FpMatrix> invert(const FpMatrix& a) {
    if (a.rows != a.cols)
        throw error("invert: matrix not square");
    std::size_t n = a.rows;
    FpMatrix aug(a.p, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = 1;
    }
    Rref r = rref(std::move(aug), n);
    if (r.rank != n)
        return std::nullopt;
    FpMatrix inv(a.p, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv.at(i, j) = r.mat.at(i, n + j);
    return inv;
}

/* Row spans.  The canonical basis of a span is the nonzero-row list of the
 * rref, so two spans are equal iff their canonical bases are equal. */
inline std::vector<FpVec> row_basis(u32 p, std::size_t dim,
                                    const std::vector<FpVec>& gens) {
    Rref r = rref(FpMatrix::from_rows(p, gens, dim));
    std::vector<FpVec> basis;
    basis.reserve(r.rank);
    for (std::size_t i = 0; i < r.rank; ++i)
        basis.push_back(r.mat.row_vec(i));
    return basis;
}

inline std::size_t span_rank(u32 p, std::size_t dim,
                             const std::vector<FpVec>& gens) {
    return rref(FpMatrix::from_rows(p, gens, dim)).rank;
}

struct SubspaceRelation {
    bool equal = false;
    bool u_contains_v = false;
    bool v_contains_u = false;
    std::vector<FpVec> sum;          // canonical basis of U + V
    std::vector<FpVec> intersection; // canonical basis of U ∩ V
};

/* U ∩ V through annihilators: with the dot pairing, Ann(span U) is the
 * kernel of the generator matrix, and Ann(Ann(W)) = W, so
 * U ∩ V = Ann(Ann U + Ann V). */
inline SubspaceRelation subspace_ops(const FpMatrix& u, const FpMatrix& v) {
    if (u.p != v.p)
        throw error("subspace_ops: mixed moduli");
    if (u.cols != v.cols)
        throw error("subspace_ops: ambient dimensions differ");
    u32 p = u.p;
    std::size_t dim = u.cols;
    SubspaceRelation rel;

    std::vector<FpVec> all = u.row_list();
    for (const FpVec& r : v.row_list())
        all.push_back(r);
    rel.sum = row_basis(p, dim, all);

    std::vector<FpVec> ann_u = kernel_basis(u);
    std::vector<FpVec> ann_v = kernel_basis(v);
    std::vector<FpVec> ann_sum = ann_u;
    for (const FpVec& r : ann_v)
        ann_sum.push_back(r);
    rel.intersection =
        kernel_basis(FpMatrix::from_rows(p, row_basis(p, dim, ann_sum), dim));
    // canonicalise: kernel vectors of an rref input need not be an rref
    rel.intersection = row_basis(p, dim, rel.intersection);

    std::size_t ru = rank_of(u);
    std::size_t rv = rank_of(v);
    std::size_t rs = rel.sum.size();
    rel.u_contains_v = (rs == ru);
    rel.v_contains_u = (rs == rv);
    rel.equal = rel.u_contains_v && rel.v_contains_u;
    return rel;
}

inline bool spans_equal(u32 p, std::size_t dim, const std::vector<FpVec>& u,
                        const std::vector<FpVec>& v) {
    return row_basis(p, dim, u) == row_basis(p, dim, v);
}

// true iff every row of v lies in span(u)
inline bool span_contains(u32 p, std::size_t dim, const std::vector<FpVec>& u,
                          const std::vector<FpVec>& v) {
    std::vector<FpVec> all = u;
    for (const FpVec& r : v)
        all.push_back(r);
    return span_rank(p, dim, all) == span_rank(p, dim, u);
}

} // namespace zpmact
