#pragma once

#include "symplectic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace zpmact {

/* Monodromy data of a regular branched covering of surfaces with deck group
 * (Z/p)^m: images in F_p^m of the standard generators of the fundamental
 * group of the genus-g quotient punctured at r branch points.
 *
 *   alpha[i], beta[i]   images of the handle generators, i < g
 *   branch[j]           image of the loop around branch point j, j < r
 */
struct ActionData {
    u32 p = 2;
    std::size_t m = 1;
    std::size_t g = 0;
    std::vector<FpVec> alpha;
    std::vector<FpVec> beta;
    std::vector<FpVec> branch;

    friend bool operator==(const ActionData&, const ActionData&) = default;
};

/* Conditions for the data to present a free-plus-branch-points action on a
 * connected total surface: nonzero branch images, zero total branch sum
 * (the product relation), and joint surjectivity onto F_p^m
 * (connectedness of the cover). */
inline void validate(const ActionData& a) {
    check_prime(a.p);
    if (a.m < 1)
        throw error("m must be at least 1");
    if (a.alpha.size() != a.g)
        throw error("alpha_images has length " +
                    std::to_string(a.alpha.size()) + ", expected g = " +
                    std::to_string(a.g));
    if (a.beta.size() != a.g)
        throw error("beta_images has length " + std::to_string(a.beta.size()) +
                    ", expected g = " + std::to_string(a.g));
    for (std::size_t i = 0; i < a.g; ++i) {
        check_vec(a.alpha[i], a.p, a.m,
                  ("alpha_images[" + std::to_string(i) + "]").c_str());
        check_vec(a.beta[i], a.p, a.m,
                  ("beta_images[" + std::to_string(i) + "]").c_str());
    }
    FpVec sum(a.m, 0);
    for (std::size_t j = 0; j < a.branch.size(); ++j) {
        check_vec(a.branch[j], a.p, a.m,
                  ("branch_images[" + std::to_string(j) + "]").c_str());
        if (is_zero_vec(a.branch[j]))
            throw error("branch_images[" + std::to_string(j) +
                        "] must be nonzero");
        for (std::size_t t = 0; t < a.m; ++t)
            sum[t] = add_mod(sum[t], a.branch[j][t], a.p);
    }
    if (!is_zero_vec(sum))
        throw error("branch images must sum to zero");
    std::vector<FpVec> gens = a.alpha;
    gens.insert(gens.end(), a.beta.begin(), a.beta.end());
    gens.insert(gens.end(), a.branch.begin(), a.branch.end());
    std::size_t rk = span_rank(a.p, a.m, gens);
    if (rk != a.m)
        throw error("monodromy images do not span F_p^m (rank " +
                    std::to_string(rk) + " < " + std::to_string(a.m) + ")");
}

inline bool is_valid(const ActionData& a) {
    try {
        validate(a);
        return true;
    } catch (const error&) {
        return false;
    }
}

/* Genus of the total (covering) surface:
 *   1 + p^m (g - 1) + r p^(m-1) (p - 1) / 2.
 * For valid data the correction term is an integer: when p = 2, m = 1 the
 * zero-sum condition forces r even. */
inline u64 total_genus(const ActionData& a) {
    validate(a);
    using i128 = __int128;
    i128 sheets = 1;
    for (std::size_t i = 0; i < a.m; ++i) {
        sheets *= a.p;
        if (sheets > (i128(1) << 100))
            throw error("total genus overflows: p^m too large");
    }
    i128 half_branch = (sheets / a.p) * (a.p - 1) *
                       static_cast<i128>(a.branch.size());
    if (half_branch % 2 != 0)
        throw std::logic_error("branch correction is not even");
    i128 total = 1 + sheets * (static_cast<i128>(a.g) - 1) + half_branch / 2;
    if (total < 0 || total > static_cast<i128>(~static_cast<u64>(0)))
        throw error("total genus out of range");
    return static_cast<u64>(total);
}

struct InducedForm {
    std::vector<FpVec> ann_basis; // canonical basis of Ann(span of branch)
    AlternatingForm form;         // intersection form in that basis
};

/* The intersection pairing the covering surface induces on the annihilator
 * of the branch span inside the dual of F_p^m.  In coordinates it collapses
 * to a sum of 2x2 minors over the handles:
 *   (e, f) = sum_i [ e(alpha_i) f(beta_i) - e(beta_i) f(alpha_i) ]. */
inline InducedForm induced_form(const ActionData& a) {
    validate(a);
    InducedForm out;
    out.ann_basis = row_basis(
        a.p, a.m, kernel_basis(FpMatrix::from_rows(a.p, a.branch, a.m)));
    std::size_t d = out.ann_basis.size();
    FpMatrix gram(a.p, d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            u32 acc = 0;
            for (std::size_t t = 0; t < a.g; ++t) {
                u32 pos = mul_mod(dot(out.ann_basis[i], a.alpha[t], a.p),
                                  dot(out.ann_basis[j], a.beta[t], a.p), a.p);
                u32 neg = mul_mod(dot(out.ann_basis[i], a.beta[t], a.p),
                                  dot(out.ann_basis[j], a.alpha[t], a.p), a.p);
                acc = add_mod(acc, sub_mod(pos, neg, a.p), a.p);
            }
            gram.at(i, j) = acc;
        }
    out.form = AlternatingForm(std::move(gram));
    return out;
}

struct StrongInvariant {
    std::size_t g = 0;
    u64 g_total = 0;
    std::vector<FpVec> branch_multiset; // sorted
    std::vector<FpVec> gfix_basis;      // canonical basis of span of branch
    std::vector<FpVec> ann_basis;
    FpMatrix gram;
    std::size_t k = 0;

    friend bool operator==(const StrongInvariant&,
                           const StrongInvariant&) = default;
};

inline StrongInvariant strong_invariant(const ActionData& a) {
    StrongInvariant si;
    si.g = a.g;
    si.g_total = total_genus(a);
    si.branch_multiset = a.branch;
    std::sort(si.branch_multiset.begin(), si.branch_multiset.end());
    si.gfix_basis = row_basis(a.p, a.m, a.branch);
    InducedForm ind = induced_form(a);
    si.ann_basis = std::move(ind.ann_basis);
    si.gram = ind.form.gram;
    si.k = si.ann_basis.size() - rank_of(si.gram);
    return si;
}

inline bool strongly_equivalent(const ActionData& a, const ActionData& b) {
    if (a.p != b.p || a.m != b.m)
        throw error("cannot compare actions with different (p, m)");
    return strong_invariant(a) == strong_invariant(b);
}

/* Minimum over GL(n, F_p) of the sorted image multiset, flattened and
 * compared lexicographically.  Rows of the group element are chosen one at
 * a time; a branch is cut when even the zero-padded sorted prefix already
 * exceeds the best complete candidate, which is sound because appending
 * coordinates can only move a sorted flattening lexicographically up. */
inline std::vector<FpVec> canonical_multiset(u32 p, std::size_t n,
                                             const std::vector<FpVec>& vecs) {
    check_prime(p);
    for (const FpVec& v : vecs) {
        check_vec(v, p, n, "multiset entry");
        if (is_zero_vec(v))
            throw error("multiset entries must be nonzero");
    }
    if (span_rank(p, n, vecs) != n)
        throw error("multiset must span F_p^n");
    if (n == 0)
        return {};
    std::size_t r = vecs.size();

    auto flatten_sorted = [&](std::vector<FpVec> rows) {
        std::sort(rows.begin(), rows.end());
        std::vector<u32> flat;
        flat.reserve(r * n);
        for (const FpVec& v : rows)
            flat.insert(flat.end(), v.begin(), v.end());
        return flat;
    };

    std::vector<u32> best = flatten_sorted(vecs);

    // prefix coordinates of each input vector under the rows chosen so far
    std::vector<FpVec> prefixes(r);
    std::vector<FpVec> reduced_rows; // rref state for independence tests

    std::vector<FpVec> all_rows;
    {
        FpVec f(n, 0);
        for (;;) {
            std::size_t pos = n;
            while (pos > 0) {
                --pos;
                if (++f[pos] < p)
                    break;
                f[pos] = 0;
            }
            if (pos == 0 && f[0] == 0)
                break;
            all_rows.push_back(f);
        }
    }

    std::function<void(std::size_t)> dfs = [&](std::size_t t) {
        if (t == n) {
            std::vector<u32> cand = flatten_sorted(prefixes);
            if (cand < best)
                best = std::move(cand);
            return;
        }
        for (const FpVec& f : all_rows) {
            FpVec rem = f;
            for (const FpVec& rr : reduced_rows) {
                std::size_t lead = 0;
                while (lead < n && rr[lead] == 0)
                    ++lead;
                if (lead < n && rem[lead])
                    axpy(rem, neg_mod(mul_mod(rem[lead], inv_mod(rr[lead], p),
                                              p), p),
                         rr, p);
            }
            if (is_zero_vec(rem))
                continue; // dependent on earlier rows

            for (std::size_t j = 0; j < r; ++j)
                prefixes[j].push_back(dot(f, vecs[j], p));
            std::vector<FpVec> padded = prefixes;
            for (FpVec& v : padded)
                v.resize(n, 0);
            if (flatten_sorted(std::move(padded)) < best) {
                reduced_rows.push_back(std::move(rem));
                dfs(t + 1);
                reduced_rows.pop_back();
            }
            for (std::size_t j = 0; j < r; ++j)
                prefixes[j].pop_back();
        }
    };
    dfs(0);

    std::vector<FpVec> out(r);
    for (std::size_t j = 0; j < r; ++j)
        out[j] = FpVec(best.begin() + static_cast<std::ptrdiff_t>(j * n),
                       best.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    return out;
}

struct WeakInvariant {
    std::size_t k = 0;
    std::size_t g = 0;
    std::size_t n = 0;
    std::vector<FpVec> multiset; // canonical, entries in F_p^n

    friend bool operator==(const WeakInvariant&, const WeakInvariant&) = default;
};

// enumeration order for class tables: (n, r, k, multiset)
inline bool weak_invariant_less(const WeakInvariant& x, const WeakInvariant& y) {
    if (x.n != y.n)
        return x.n < y.n;
    if (x.multiset.size() != y.multiset.size())
        return x.multiset.size() < y.multiset.size();
    if (x.k != y.k)
        return x.k < y.k;
    if (x.multiset != y.multiset)
        return x.multiset < y.multiset;
    return x.g < y.g;
}

// coordinates of the branch images in the canonical basis of their span
inline std::vector<FpVec> branch_coordinates(const ActionData& a) {
    Rref r = rref(FpMatrix::from_rows(a.p, a.branch, a.m));
    std::size_t n = r.rank;
    std::vector<FpVec> coords;
    coords.reserve(a.branch.size());
    for (const FpVec& c : a.branch) {
        FpVec lam(n);
        for (std::size_t i = 0; i < n; ++i)
            lam[i] = c[r.pivots[i]];
        FpVec back(a.m, 0);
        for (std::size_t i = 0; i < n; ++i)
            axpy(back, lam[i], r.mat.row_vec(i), a.p);
        if (back != c)
            throw std::logic_error("branch vector outside its own span");
        coords.push_back(std::move(lam));
    }
    return coords;
}

inline WeakInvariant weak_invariant(const ActionData& a) {
    validate(a);
    WeakInvariant wi;
    wi.g = a.g;
    InducedForm ind = induced_form(a);
    wi.n = a.m - ind.ann_basis.size();
    wi.k = ind.ann_basis.size() - rank_of(ind.form.gram);
    wi.multiset = canonical_multiset(a.p, wi.n, branch_coordinates(a));
    return wi;
}

inline bool weakly_equivalent(const ActionData& a, const ActionData& b) {
    if (a.p != b.p || a.m != b.m)
        throw error("cannot compare actions with different (p, m)");
    return weak_invariant(a) == weak_invariant(b);
}

/* Multiplicity profile F(h) = (k_1, ..., k_{p-1}) with k_i the number of
 * branch images equal to i*h, for every nonzero h.  Composing the data with
 * an automorphism permutes the profiles, so the multiset of profiles is a
 * cheap weak-equivalence prefilter. */
inline std::map<FpVec, std::vector<u32>>
multiset_signature(const ActionData& a) {
    validate(a);
    std::map<FpVec, std::vector<u32>> sig;
    FpVec h(a.m, 0);
    for (;;) {
        std::size_t pos = a.m;
        while (pos > 0) {
            --pos;
            if (++h[pos] < a.p)
                break;
            h[pos] = 0;
        }
        if (pos == 0 && h[0] == 0)
            break;
        std::vector<u32> counts(a.p - 1, 0);
        for (u32 i = 1; i < a.p; ++i) {
            FpVec target = scale_vec(h, i, a.p);
            for (const FpVec& c : a.branch)
                if (c == target)
                    ++counts[i - 1];
        }
        sig[h] = std::move(counts);
    }
    return sig;
}

/* Witness action for invariants (k, g, C): split a complement of
 * H = span(C) as s hyperbolic pairs plus k radical directions, realised on
 * the first s + k handles; remaining handles map to zero.  The genus
 * inequality 2g >= (m - n) + k is exactly what makes this fit. */
inline ActionData construct_action(u32 p, std::size_t m, std::size_t k,
                                   std::size_t g,
                                   const std::vector<FpVec>& c) {
    check_prime(p);
    if (m < 1)
        throw error("m must be at least 1");
    FpVec sum(m, 0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        check_vec(c[j], p, m, ("C[" + std::to_string(j) + "]").c_str());
        if (is_zero_vec(c[j]))
            throw error("C[" + std::to_string(j) + "] must be nonzero");
        for (std::size_t t = 0; t < m; ++t)
            sum[t] = add_mod(sum[t], c[j][t], p);
    }
    if (!is_zero_vec(sum))
        throw error("sum(C_i) = 0 violated");

    Rref rr = rref(FpMatrix::from_rows(p, c, m));
    std::size_t n = rr.rank;
    std::size_t d = m - n;
    if (k > d)
        throw error("k <= m-n violated");
    if ((d - k) % 2 != 0)
        throw error("k = (m-n) mod 2 violated");
    if (2 * g < d + k)
        throw error("g >= (m-n+k)/2 violated");

    // complement of span(C): standard vectors at the non-pivot coordinates
    std::vector<bool> is_pivot(m, false);
    for (std::size_t col : rr.pivots)
        is_pivot[col] = true;
    std::vector<FpVec> w;
    for (std::size_t col = 0; col < m; ++col) {
        if (is_pivot[col])
            continue;
        FpVec e(m, 0);
        e[col] = 1;
        w.push_back(std::move(e));
    }

    ActionData out;
    out.p = p;
    out.m = m;
    out.g = g;
    out.alpha.assign(g, FpVec(m, 0));
    out.beta.assign(g, FpVec(m, 0));
    std::size_t s = (d - k) / 2;
    for (std::size_t i = 0; i < s; ++i) {
        out.alpha[i] = w[i];
        out.beta[i] = w[s + i];
    }
    for (std::size_t t = 0; t < k; ++t)
        out.alpha[s + t] = w[2 * s + t];
    out.branch = c;

    try {
        validate(out);
    } catch (const error& e) {
        throw std::logic_error(std::string("constructed action invalid: ") +
                               e.what());
    }
    return out;
}

/* k-values realisable by free actions of (Z/p)^m on genus-g quotients:
 * k <= m, k = m mod 2, g >= (m+k)/2.  Independent of p. */
inline std::vector<std::size_t> enumerate_free_classes(std::size_t m,
                                                       std::size_t g) {
    if (m < 1)
        throw error("m must be at least 1");
    std::vector<std::size_t> ks;
    for (std::size_t k = m % 2; k <= m; k += 2)
        if (2 * g >= m + k)
            ks.push_back(k);
    return ks;
}

namespace detail {

// nondecreasing tuples of r nonzero vectors in F_p^dim summing to zero
inline void for_each_branch_tuple(
    u32 p, std::size_t dim, std::size_t r,
    const std::function<void(const std::vector<FpVec>&)>& fn) {
    std::vector<FpVec> all;
    {
        FpVec v(dim, 0);
        for (;;) {
            std::size_t pos = dim;
            while (pos > 0) {
                --pos;
                if (++v[pos] < p)
                    break;
                v[pos] = 0;
            }
            if (pos == 0 && v[0] == 0)
                break;
            all.push_back(v);
        }
    }
    std::vector<FpVec> chosen;
    FpVec sum(dim, 0);
    std::function<void(std::size_t, std::size_t)> dfs =
        [&](std::size_t start, std::size_t remaining) {
            if (remaining == 0) {
                if (is_zero_vec(sum))
                    fn(chosen);
                return;
            }
            if (remaining == 1) {
                FpVec need(dim);
                for (std::size_t t = 0; t < dim; ++t)
                    need[t] = neg_mod(sum[t], p);
                if (is_zero_vec(need))
                    return;
                if (!chosen.empty() && need < chosen.back())
                    return;
                chosen.push_back(need);
                fn(chosen);
                chosen.pop_back();
                return;
            }
            for (std::size_t idx = start; idx < all.size(); ++idx) {
                chosen.push_back(all[idx]);
                for (std::size_t t = 0; t < dim; ++t)
                    sum[t] = add_mod(sum[t], all[idx][t], p);
                dfs(idx, remaining - 1);
                for (std::size_t t = 0; t < dim; ++t)
                    sum[t] = sub_mod(sum[t], all[idx][t], p);
                chosen.pop_back();
            }
        };
    dfs(0, r);
}

inline std::vector<std::size_t> admissible_ks(std::size_t d, std::size_t g) {
    std::vector<std::size_t> ks;
    for (std::size_t k = d % 2; k <= d; k += 2)
        if (2 * g >= d + k)
            ks.push_back(k);
    return ks;
}

} // namespace detail

/* All weak classes with quotient genus g and at most r_max branch points:
 * one entry per admissible triple (k, n, canonical multiset).  Free classes
 * are the n = 0 rows.  A branched class needs n >= 1 generators among at
 * least max(n, 2) branch points. */
inline std::vector<WeakInvariant>
enumerate_weak_classes(u32 p, std::size_t m, std::size_t g, std::size_t r_max,
                       const Limits& lim = {}) {
    check_prime(p);
    if (m < 1)
        throw error("m must be at least 1");

    u64 predicted = 0;
    for (std::size_t n = 1; n <= std::min(m, r_max); ++n)
        for (std::size_t r = std::max<std::size_t>(n, 2); r <= r_max; ++r) {
            u64 cnt = pow_saturating(p, static_cast<u64>(n) * r,
                                     lim.max_candidates);
            predicted = predicted > lim.max_candidates - std::min(cnt, lim.max_candidates)
                            ? lim.max_candidates + 1
                            : predicted + cnt;
            if (predicted > lim.max_candidates)
                throw guard_error(
                    "instance too large: weak-class enumeration would scan "
                    "more than max_candidates = " +
                    std::to_string(lim.max_candidates) +
                    " branch tuples; reduce r_max or m, or raise "
                    "max_candidates");
        }

    std::vector<WeakInvariant> out;
    for (std::size_t k : detail::admissible_ks(m, g))
        out.push_back({k, g, 0, {}});

    for (std::size_t n = 1; n <= std::min(m, r_max); ++n) {
        std::vector<std::size_t> ks = detail::admissible_ks(m - n, g);
        if (ks.empty())
            continue;
        for (std::size_t r = std::max<std::size_t>(n, 2); r <= r_max; ++r) {
            std::set<std::vector<FpVec>> reps;
            detail::for_each_branch_tuple(
                p, n, r, [&](const std::vector<FpVec>& tuple) {
                    if (span_rank(p, n, tuple) != n)
                        return;
                    reps.insert(canonical_multiset(p, n, tuple));
                });
            for (const auto& rep : reps)
                for (std::size_t k : ks)
                    out.push_back({k, g, n, rep});
        }
    }
    std::sort(out.begin(), out.end(), weak_invariant_less);
    return out;
}

} // namespace zpmact
