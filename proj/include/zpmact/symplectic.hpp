#pragma once

#include "fp_matrix.hpp"
#include "limits.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace zpmact {

inline void check_vec(const FpVec& v, u32 p, std::size_t dim,
                      const char* what) {
    if (v.size() != dim)
        throw error(std::string(what) + ": expected length " +
                    std::to_string(dim) + ", got " + std::to_string(v.size()));
    for (u32 x : v)
        if (x >= p)
            throw error(std::string(what) + ": entry " + std::to_string(x) +
                        " out of range [0, " + std::to_string(p) + ")");
}

/* Bilinear form with (x,x) = 0 for all x; over F_2 this is strictly more
 * than antisymmetry, so the zero diagonal is checked explicitly. */
struct AlternatingForm {
    u32 p = 2;
    std::size_t dim = 0;
    FpMatrix gram;

    AlternatingForm() : gram(2, 0, 0) {}

    explicit AlternatingForm(FpMatrix g)
        : p(g.p), dim(g.rows), gram(std::move(g)) {
        if (gram.rows != gram.cols)
            throw error("alternating form: gram matrix not square");
        for (std::size_t i = 0; i < dim; ++i) {
            if (gram.at(i, i) != 0)
                throw error("alternating form: nonzero diagonal entry at " +
                            std::to_string(i));
            for (std::size_t j = i + 1; j < dim; ++j)
                if (gram.at(i, j) != neg_mod(gram.at(j, i), p))
                    throw error("alternating form: gram not antisymmetric at (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ")");
        }
    }

    u32 eval(const FpVec& x, const FpVec& y) const {
        if (x.size() != dim || y.size() != dim)
            throw error("form eval: dimension mismatch");
        u64 acc = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (!x[i])
                continue;
            u64 row = 0;
            for (std::size_t j = 0; j < dim; ++j)
                row += static_cast<u64>(gram.at(i, j)) * y[j];
            acc += x[i] * (row % p);
        }
        return static_cast<u32>(acc % p);
    }

    friend bool operator==(const AlternatingForm&,
                           const AlternatingForm&) = default;
};

inline AlternatingForm zero_form(u32 p, std::size_t m) {
    return AlternatingForm(FpMatrix(p, m, m));
}

/* Standard symplectic space of genus g: basis e_1..e_2g with
 * (e_i, e_j) = 1 exactly when j = 2g+1-i and i < j. */
struct StandardSymplecticSpace {
    u32 p = 2;
    std::size_t genus = 0;
    AlternatingForm form;
};

inline StandardSymplecticSpace standard_form(u32 p, std::size_t g) {
    FpMatrix gram(p, 2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        gram.at(i, 2 * g - 1 - i) = 1;
        gram.at(2 * g - 1 - i, i) = neg_mod(1, p);
    }
    return {p, g, AlternatingForm(std::move(gram))};
}

/* The same space in the basis a_1..a_g, b_1..b_g with (a_i, b_i) = 1:
 * block matrix [[0, I], [-I, 0]].  This is the ordering used for surface
 * homology bases. */
inline AlternatingForm ab_block_form(u32 p, std::size_t g) {
    FpMatrix gram(p, 2 * g, 2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        gram.at(i, g + i) = 1;
        gram.at(g + i, i) = neg_mod(1, p);
    }
    return AlternatingForm(std::move(gram));
}

struct Radical {
    std::vector<FpVec> basis; // canonical kernel basis of the gram matrix
    std::size_t k = 0;
};

inline Radical radical(const AlternatingForm& f) {
    Radical r;
    r.basis = kernel_basis(f.gram);
    r.k = r.basis.size();
    return r;
}

/* Adapted basis a_1..a_r, b_1..b_s with s + r = dim, (a_i, b_j) = d_ij,
 * all other products zero and a_{s+1}..a_r spanning the radical. */
struct SymplecticBasis {
    std::vector<FpVec> a;
    std::vector<FpVec> b;

    std::size_t r() const { return a.size(); }
    std::size_t s() const { return b.size(); }
    std::size_t k() const { return a.size() - b.size(); }
};

/* Greedy pairing: take the first remaining vector x that pairs with
 * anything, normalise its first partner y to (x,y) = 1, then correct the
 * other vectors by w -> w - (w,y)x + (w,x)y, which kills their products
 * with the pair and keeps everything a basis.  Vectors that never find a
 * partner are exactly a basis of the radical. */
inline SymplecticBasis symplectic_basis(const AlternatingForm& f) {
    std::vector<FpVec> work;
    work.reserve(f.dim);
    for (std::size_t i = 0; i < f.dim; ++i) {
        FpVec e(f.dim, 0);
        e[i] = 1;
        work.push_back(std::move(e));
    }

    SymplecticBasis out;
    for (;;) {
        std::size_t xi = work.size(), yi = work.size();
        for (std::size_t i = 0; i < work.size() && xi == work.size(); ++i)
            for (std::size_t j = i + 1; j < work.size(); ++j)
                if (f.eval(work[i], work[j]) != 0) {
                    xi = i;
                    yi = j;
                    break;
                }
        if (xi == work.size())
            break;
        FpVec x = work[xi];
        FpVec y = scale_vec(work[yi], inv_mod(f.eval(work[xi], work[yi]), f.p),
                            f.p);
        std::vector<FpVec> next;
        next.reserve(work.size() - 2);
        for (std::size_t t = 0; t < work.size(); ++t) {
            if (t == xi || t == yi)
                continue;
            FpVec w = work[t];
            axpy(w, neg_mod(f.eval(w, y), f.p), x, f.p);
            axpy(w, f.eval(w, x), y, f.p);
            next.push_back(std::move(w));
        }
        work = std::move(next);
        out.a.push_back(std::move(x));
        out.b.push_back(std::move(y));
    }
    for (FpVec& w : work)
        out.a.push_back(std::move(w));
    return out;
}

inline bool check_symplectic_basis(const AlternatingForm& f,
                                   const SymplecticBasis& sb) {
    std::size_t r = sb.r(), s = sb.s();
    if (s > r || r + s != f.dim)
        return false;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (f.eval(sb.a[i], sb.a[j]) != 0)
                return false;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            if (f.eval(sb.b[i], sb.b[j]) != 0)
                return false;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < s; ++j) {
            u32 want = (i == j) ? 1 : 0;
            if (f.eval(sb.a[i], sb.b[j]) != want)
                return false;
        }
    std::vector<FpVec> all = sb.a;
    all.insert(all.end(), sb.b.begin(), sb.b.end());
    if (span_rank(f.p, f.dim, all) != f.dim)
        return false;
    std::vector<FpVec> rad_part(sb.a.begin() + static_cast<std::ptrdiff_t>(s),
                                sb.a.end());
    return spans_equal(f.p, f.dim, rad_part, radical(f).basis);
}

inline FpMatrix restrict_gram(const AlternatingForm& f,
                              const std::vector<FpVec>& w) {
    FpMatrix g(f.p, w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            g.at(i, j) = f.eval(w[i], w[j]);
    return g;
}

/* Matrix of x -> x + (x,v) v.  Isometry of the form for any v; over the
 * integers the same formula gives an integral isometry of the integral
 * standard form, which is what makes these the right generators for the
 * reduction-surjectivity check. */
inline FpMatrix transvection(const AlternatingForm& f, const FpVec& v) {
    check_vec(v, f.p, f.dim, "transvection vector");
    FpVec gv = mat_vec(f.gram, v);
    FpMatrix m = FpMatrix::identity(f.p, f.dim);
    for (std::size_t i = 0; i < f.dim; ++i)
        for (std::size_t j = 0; j < f.dim; ++j)
            m.at(i, j) = add_mod(m.at(i, j), mul_mod(v[i], gv[j], f.p), f.p);
    return m;
}

namespace detail {

// rows (v_i, .) of the pairing against a fixed list of vectors
inline FpMatrix pairing_rows(const AlternatingForm& f,
                             const std::vector<FpVec>& vs) {
    FpMatrix m(f.p, vs.size(), f.dim);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        FpVec row = vec_mat(vs[i], f.gram);
        for (std::size_t j = 0; j < f.dim; ++j)
            m.at(i, j) = row[j];
    }
    return m;
}

struct SpanTransform {
    std::vector<FpVec> basis;        // independent rows
    std::vector<FpVec> combo;        // basis[i] = combo[i] * gens
    std::vector<FpVec> dependencies; // rows d with d * gens = 0
};

/* Row-reduce gens while tracking the row operations in an attached
 * identity block. */
inline SpanTransform span_with_transform(u32 p, std::size_t dim,
                                         const std::vector<FpVec>& gens) {
    std::size_t t = gens.size();
    FpMatrix aug(p, t, dim + t);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < dim; ++j)
            aug.at(i, j) = gens[i][j];
        aug.at(i, dim + i) = 1;
    }
    Rref r = rref(std::move(aug), dim);
    SpanTransform out;
    for (std::size_t i = 0; i < t; ++i) {
        FpVec left(dim), right(t);
        for (std::size_t j = 0; j < dim; ++j)
            left[j] = r.mat.at(i, j);
        for (std::size_t j = 0; j < t; ++j)
            right[j] = r.mat.at(i, dim + j);
        if (i < r.rank) {
            out.basis.push_back(std::move(left));
            out.combo.push_back(std::move(right));
        } else {
            out.dependencies.push_back(std::move(right));
        }
    }
    return out;
}

/* Extend matched isotropic-pair lists and matched radical-vector lists of a
 * common subspace to a full symplectic basis a_1..a_g, b_1..b_g of the
 * ambient space.  Each radical vector x gets a partner y solving
 * (x,y) = 1 against zero pairing with everything else still in play; the
 * leftover symplectic complement is split by the greedy pairing. */
inline void complete_to_full_basis(const StandardSymplecticSpace& sp,
                                   std::vector<FpVec>& a, std::vector<FpVec>& b,
                                   std::deque<FpVec> pending) {
    const AlternatingForm& f = sp.form;
    while (!pending.empty()) {
        FpVec x = pending.front();
        pending.pop_front();
        std::vector<FpVec> constraints;
        FpVec rhs;
        for (const FpVec& v : a) {
            constraints.push_back(v);
            rhs.push_back(0);
        }
        for (const FpVec& v : b) {
            constraints.push_back(v);
            rhs.push_back(0);
        }
        constraints.push_back(x);
        rhs.push_back(1);
        for (const FpVec& v : pending) {
            constraints.push_back(v);
            rhs.push_back(0);
        }
        auto y = solve(pairing_rows(f, constraints), rhs);
        if (!y)
            throw std::logic_error("radical partner system inconsistent");
        a.push_back(std::move(x));
        b.push_back(std::move(*y));
    }

    std::vector<FpVec> span_ab = a;
    span_ab.insert(span_ab.end(), b.begin(), b.end());
    std::vector<FpVec> comp = kernel_basis(pairing_rows(f, span_ab));
    if (comp.empty())
        return;
    AlternatingForm comp_form(restrict_gram(f, comp));
    SymplecticBasis sb = symplectic_basis(comp_form);
    if (sb.k() != 0)
        throw std::logic_error("symplectic complement is degenerate");
    for (std::size_t i = 0; i < sb.s(); ++i) {
        FpVec av(f.dim, 0), bv(f.dim, 0);
        for (std::size_t j = 0; j < comp.size(); ++j) {
            axpy(av, sb.a[i][j], comp[j], f.p);
            axpy(bv, sb.b[i][j], comp[j], f.p);
        }
        a.push_back(std::move(av));
        b.push_back(std::move(bv));
    }
}

} // namespace detail

/* Extend a form-preserving isomorphism psi: span(U) -> span(V) to an
 * isometry of the whole standard space, returned as a matrix M acting by
 * x -> Mx.  psi(U[j]) = sum_i psi(i,j) V[i].
 *
 * Both spans are given adapted bases through the same greedy reduction of
 * the restricted gram matrix (psi being an isometry makes the two restricted
 * grams equal, so one reduction serves both sides), the radical parts are
 * completed to hyperbolic pairs, fresh pairs fill the complements, and M is
 * the change of basis between the two completed full bases. */
inline FpMatrix extend_isometry(const StandardSymplecticSpace& sp,
                                const std::vector<FpVec>& u,
                                const std::vector<FpVec>& v,
                                const FpMatrix& psi) {
    const AlternatingForm& f = sp.form;
    u32 p = sp.p;
    std::size_t dim = f.dim;
    for (const FpVec& x : u)
        check_vec(x, p, dim, "U generator");
    for (const FpVec& x : v)
        check_vec(x, p, dim, "V generator");
    if (psi.p != p)
        throw error("extend_isometry: psi has wrong modulus");
    if (psi.rows != v.size() || psi.cols != u.size())
        throw error("extend_isometry: psi must be |V| x |U|");

    std::vector<FpVec> image_u(u.size(), FpVec(dim, 0));
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t i = 0; i < v.size(); ++i)
            axpy(image_u[j], psi.at(i, j), v[i], p);

    detail::SpanTransform st = detail::span_with_transform(p, dim, u);
    std::size_t d = st.basis.size();
    for (const FpVec& dep : st.dependencies) {
        FpVec img(dim, 0);
        for (std::size_t j = 0; j < u.size(); ++j)
            axpy(img, dep[j], image_u[j], p);
        if (!is_zero_vec(img))
            throw error("psi does not define a map on span(U)");
    }
    std::vector<FpVec> image_w(d, FpVec(dim, 0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < u.size(); ++j)
            axpy(image_w[i], st.combo[i][j], image_u[j], p);

    if (span_rank(p, dim, image_w) != d)
        throw error("psi is not injective on span(U)");
    if (span_rank(p, dim, v) != d)
        throw error("psi is not onto span(V)");
    FpMatrix gram_u = restrict_gram(f, st.basis);
    if (gram_u != restrict_gram(f, image_w))
        throw error("psi does not preserve the form");

    SymplecticBasis sb = symplectic_basis(AlternatingForm(gram_u));
    auto lift = [&](const std::vector<FpVec>& pts, const FpVec& coords) {
        FpVec out(dim, 0);
        for (std::size_t j = 0; j < coords.size(); ++j)
            axpy(out, coords[j], pts[j], p);
        return out;
    };
    std::vector<FpVec> a_u, b_u, a_v, b_v;
    std::deque<FpVec> rad_u, rad_v;
    for (std::size_t i = 0; i < sb.s(); ++i) {
        a_u.push_back(lift(st.basis, sb.a[i]));
        b_u.push_back(lift(st.basis, sb.b[i]));
        a_v.push_back(lift(image_w, sb.a[i]));
        b_v.push_back(lift(image_w, sb.b[i]));
    }
    for (std::size_t i = sb.s(); i < sb.r(); ++i) {
        rad_u.push_back(lift(st.basis, sb.a[i]));
        rad_v.push_back(lift(image_w, sb.a[i]));
    }
    detail::complete_to_full_basis(sp, a_u, b_u, std::move(rad_u));
    detail::complete_to_full_basis(sp, a_v, b_v, std::move(rad_v));

    auto columns = [&](const std::vector<FpVec>& a, const std::vector<FpVec>& b) {
        FpMatrix m(p, dim, dim);
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) {
                m.at(i, j) = a[j][i];
                m.at(i, a.size() + j) = b[j][i];
            }
        return m;
    };
    FpMatrix basis_u = columns(a_u, b_u);
    FpMatrix basis_v = columns(a_v, b_v);
    auto inv_u = invert(basis_u);
    if (!inv_u)
        throw std::logic_error("completed basis is singular");
    FpMatrix m = mat_mul(basis_v, *inv_u);

    FpMatrix check = mat_mul(mat_mul(m.transpose(), f.gram), m);
    if (check != f.gram)
        throw std::logic_error("extension does not preserve the form");
    for (std::size_t j = 0; j < u.size(); ++j)
        if (mat_vec(m, u[j]) != image_u[j])
            throw std::logic_error("extension does not restrict to psi");
    return m;
}

// p^e clamped so guard comparisons cannot overflow
inline u64 pow_saturating(u64 p, u64 e, u64 cap) {
    u64 acc = 1;
    for (u64 i = 0; i < e; ++i) {
        if (acc > cap / p)
            return cap + 1;
        acc *= p;
    }
    return acc;
}

inline u64 sp_order(u32 p, std::size_t g) {
    unsigned __int128 n = 1;
    const unsigned __int128 cap = ~static_cast<u64>(0);
    for (std::size_t i = 0; i < g * g; ++i) {
        n *= p;
        if (n > cap)
            return static_cast<u64>(cap);
    }
    for (std::size_t i = 1; i <= g; ++i) {
        unsigned __int128 q = 1;
        for (std::size_t j = 0; j < 2 * i; ++j)
            q *= p;
        n *= q - 1;
        if (n > cap)
            return static_cast<u64>(cap);
    }
    return static_cast<u64>(n);
}

/* Every invertible matrix preserving the form, by exhaustive filter over
 * all dim x dim matrices.  Intentionally brute force: this is the ground
 * truth the generator-closure computations are compared against. */
inline std::vector<FpMatrix> form_isometry_group(const AlternatingForm& f,
                                                 const Limits& lim = {}) {
    std::size_t n = f.dim;
    u64 total = pow_saturating(f.p, static_cast<u64>(n) * n,
                               lim.max_candidates);
    if (total > lim.max_candidates)
        throw guard_error("instance too large: p^(dim^2) = p^" +
                          std::to_string(n * n) + " candidate matrices exceed "
                          "max_candidates = " +
                          std::to_string(lim.max_candidates));
    std::vector<FpMatrix> group;
    FpMatrix m(f.p, n, n);
    for (;;) {
        FpMatrix prod = mat_mul(mat_mul(m.transpose(), f.gram), m);
        if (prod == f.gram && rank_of(m) == n) {
            group.push_back(m);
            if (group.size() > lim.max_group_order)
                throw guard_error(
                    "instance too large: isometry group exceeds "
                    "max_group_order = " +
                    std::to_string(lim.max_group_order));
        }
        std::size_t pos = n * n;
        while (pos > 0) {
            --pos;
            if (++m.e[pos] < f.p)
                break;
            m.e[pos] = 0;
        }
        if (pos == 0 && m.e[0] == 0)
            break;
    }
    return group;
}

inline std::vector<FpMatrix> sp_group(u32 p, std::size_t g,
                                      const Limits& lim = {}) {
    if (sp_order(p, g) > lim.max_group_order)
        throw guard_error("instance too large: |Sp(" + std::to_string(2 * g) +
                          ", F_" + std::to_string(p) + ")| = " +
                          std::to_string(sp_order(p, g)) +
                          " exceeds max_group_order = " +
                          std::to_string(lim.max_group_order));
    return form_isometry_group(standard_form(p, g).form, lim);
}

struct SurjectivityReport {
    bool ok = false;
    u64 generated_order = 0;
    u64 full_order = 0;
};

namespace detail {

// integral antidiagonal gram of the genus-g standard form
inline std::vector<i64> integral_standard_gram(std::size_t g) {
    std::size_t n = 2 * g;
    std::vector<i64> j(n * n, 0);
    for (std::size_t i = 0; i < g; ++i) {
        j[i * n + (n - 1 - i)] = 1;
        j[(n - 1 - i) * n + i] = -1;
    }
    return j;
}

} // namespace detail

/* Exhaustive check, for one (p, g), that reductions mod p of integral
 * isometries hit all of the mod-p isometry group.  The integral side is
 * represented by its transvections x -> x + (x,v) v at integer vectors v,
 * verified to preserve the integral form before reducing; their mod-p
 * closure is compared against the full group obtained by filtering. */
inline SurjectivityReport verify_reduction_surjectivity(u32 p, std::size_t g,
                                                        const Limits& lim = {}) {
    check_prime(p);
    if (g == 0)
        return {true, 1, 1};
    std::size_t n = 2 * g;
    if (sp_order(p, g) > lim.max_group_order ||
        pow_saturating(p, static_cast<u64>(n) * n, lim.max_candidates) >
            lim.max_candidates)
        throw guard_error(
            "instance too large: raise max_group_order/max_candidates or "
            "reduce (p, g)");

    StandardSymplecticSpace sp = standard_form(p, g);
    std::vector<i64> jz = detail::integral_standard_gram(g);
    auto jz_at = [&](std::size_t i, std::size_t j) { return jz[i * n + j]; };

    std::set<std::vector<u32>> gens;
    FpVec v(n, 0);
    for (;;) {
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++v[pos] < p)
                break;
            v[pos] = 0;
        }
        if (pos == 0 && v[0] == 0)
            break;
        // integral transvection at v, entries delta_ij + v_i (Jv)_j
        std::vector<i64> t(n * n, 0);
        std::vector<i64> jv(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                jv[i] += jz_at(i, j) * static_cast<i64>(v[j]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t[i * n + j] = (i == j ? 1 : 0) +
                               static_cast<i64>(v[i]) * jv[j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                i64 acc = 0;
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        acc += t[k * n + i] * jz_at(k, l) * t[l * n + j];
                if (acc != jz_at(i, j))
                    throw std::logic_error(
                        "integral transvection is not an isometry");
            }
        std::vector<u32> red(n * n);
        for (std::size_t idx = 0; idx < n * n; ++idx)
            red[idx] = reduce_mod(t[idx], p);
        gens.insert(std::move(red));
    }

    std::vector<FpMatrix> gen_mats;
    for (const auto& flat : gens) {
        FpMatrix m(p, n, n);
        m.e = flat;
        gen_mats.push_back(std::move(m));
    }

    std::set<std::vector<u32>> closure;
    std::deque<FpMatrix> frontier;
    closure.insert(FpMatrix::identity(p, n).e);
    frontier.push_back(FpMatrix::identity(p, n));
    while (!frontier.empty()) {
        FpMatrix cur = std::move(frontier.front());
        frontier.pop_front();
        for (const FpMatrix& gmat : gen_mats) {
            FpMatrix nxt = mat_mul(cur, gmat);
            if (closure.insert(nxt.e).second) {
                if (closure.size() > lim.max_group_order)
                    throw guard_error(
                        "instance too large: generated closure exceeds "
                        "max_group_order");
                frontier.push_back(std::move(nxt));
            }
        }
    }

    SurjectivityReport rep;
    rep.generated_order = closure.size();
    rep.full_order = sp_group(p, g, lim).size();
    rep.ok = rep.generated_order == rep.full_order;
    return rep;
}

} // namespace zpmact
