#pragma once

#include "action.hpp"

#include <deque>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace zpmact {

/* The covering surface unfolded into sheets: one sheet per group element,
 * every generator of the punctured quotient acting by translation.  Genus
 * and connectivity read off this object make no use of the closed-form
 * genus formula or the span criterion, which is what makes it an
 * independent witness. */
struct PermutationCover {
    u32 p = 2;
    std::size_t m = 1;
    std::size_t degree = 1;     // p^m sheets
    std::size_t base_genus = 0; // genus of the quotient
    std::vector<std::vector<u32>> alpha;
    std::vector<std::vector<u32>> beta;
    std::vector<std::vector<u32>> branch;
};

inline std::size_t sheet_of_vec(const FpVec& v, u32 p) {
    std::size_t s = 0;
    for (std::size_t i = v.size(); i > 0; --i)
        s = s * p + v[i - 1];
    return s;
}

inline FpVec vec_of_sheet(std::size_t s, u32 p, std::size_t m) {
    FpVec v(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = static_cast<u32>(s % p);
        s /= p;
    }
    return v;
}

inline std::vector<u32> translation_perm(const FpVec& t, u32 p,
                                         std::size_t degree) {
    std::vector<u32> perm(degree);
    for (std::size_t s = 0; s < degree; ++s) {
        FpVec v = vec_of_sheet(s, p, t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            v[i] = add_mod(v[i], t[i], p);
        perm[s] = static_cast<u32>(sheet_of_vec(v, p));
    }
    return perm;
}

inline PermutationCover build_cover(const ActionData& a,
                                    const Limits& lim = {}) {
    validate(a);
    u64 degree = pow_saturating(a.p, a.m, lim.max_sheets);
    if (degree > lim.max_sheets)
        throw guard_error("instance too large: covering degree p^m exceeds "
                          "max_sheets = " +
                          std::to_string(lim.max_sheets));
    PermutationCover cov;
    cov.p = a.p;
    cov.m = a.m;
    cov.degree = static_cast<std::size_t>(degree);
    cov.base_genus = a.g;
    for (const FpVec& v : a.alpha)
        cov.alpha.push_back(translation_perm(v, a.p, cov.degree));
    for (const FpVec& v : a.beta)
        cov.beta.push_back(translation_perm(v, a.p, cov.degree));
    for (const FpVec& v : a.branch)
        cov.branch.push_back(translation_perm(v, a.p, cov.degree));
    return cov;
}

inline std::size_t cycle_count(const std::vector<u32>& perm) {
    std::vector<bool> seen(perm.size(), false);
    std::size_t cycles = 0;
    for (std::size_t s = 0; s < perm.size(); ++s) {
        if (seen[s])
            continue;
        ++cycles;
        std::size_t t = s;
        while (!seen[t]) {
            seen[t] = true;
            t = perm[t];
        }
    }
    return cycles;
}

/* Euler characteristic by counting cells of the unfolded surface: the
 * punctured quotient is cut into one disc by 2g + r loops, so the cover has
 * degree vertices... more directly,
 *   chi = degree * (2 - 2 g_base - r) + sum_j #cycles(branch_j),
 * each branch point contributing one point per cycle of its permutation. */
inline u64 cover_genus(const PermutationCover& cov) {
    i64 chi = static_cast<i64>(cov.degree) *
              (2 - 2 * static_cast<i64>(cov.base_genus) -
               static_cast<i64>(cov.branch.size()));
    for (const auto& perm : cov.branch)
        chi += static_cast<i64>(cycle_count(perm));
    i64 two_minus = 2 - chi;
    if (two_minus < 0 || two_minus % 2 != 0)
        throw std::logic_error("cover has no closed-surface genus");
    return static_cast<u64>(two_minus / 2);
}

inline bool is_connected(const PermutationCover& cov) {
    std::vector<std::size_t> parent(cov.degree);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find =
        [&](std::size_t x) -> std::size_t {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        parent[find(a)] = find(b);
    };
    for (const auto* group : {&cov.alpha, &cov.beta, &cov.branch})
        for (const auto& perm : *group)
            for (std::size_t s = 0; s < cov.degree; ++s)
                unite(s, perm[s]);
    std::size_t roots = 0;
    for (std::size_t s = 0; s < cov.degree; ++s)
        if (find(s) == s)
            ++roots;
    return roots <= 1;
}

enum class EquivalenceMode { strong, weak };

/* Every valid ActionData with the given parameters, branch tuple kept
 * sorted (branch relabelling is quotiented out up front).  Deterministic
 * order: handle images in odometer order, then branch count, then tuple. */
inline std::vector<ActionData> enumerate_actions(u32 p, std::size_t m,
                                                 std::size_t g,
                                                 std::size_t r_max,
                                                 u64 guard = 1'000'000) {
    check_prime(p);
    if (m < 1)
        throw error("m must be at least 1");
    u64 handle_count = pow_saturating(p, 2 * static_cast<u64>(g) * m, guard);
    u64 tuple_bound = 0;
    for (std::size_t r = 0; r <= r_max; ++r) {
        u64 c = pow_saturating(p, static_cast<u64>(m) * r, guard);
        tuple_bound = tuple_bound > guard - std::min(c, guard)
                          ? guard + 1
                          : tuple_bound + c;
        if (tuple_bound > guard)
            break;
    }
    if (handle_count > guard || tuple_bound > guard ||
        (tuple_bound != 0 && handle_count > guard / tuple_bound))
        throw guard_error(
            "instance too large: action enumeration would scan more than " +
            std::to_string(guard) + " candidates");

    std::vector<std::vector<std::vector<FpVec>>> tuples_by_r(r_max + 1);
    for (std::size_t r = 0; r <= r_max; ++r)
        detail::for_each_branch_tuple(
            p, m, r, [&](const std::vector<FpVec>& t) {
                tuples_by_r[r].push_back(t);
            });

    std::vector<ActionData> out;
    std::vector<u32> digits(2 * g * m, 0);
    for (;;) {
        ActionData a;
        a.p = p;
        a.m = m;
        a.g = g;
        for (std::size_t i = 0; i < g; ++i) {
            a.alpha.emplace_back(digits.begin() + static_cast<std::ptrdiff_t>(i * m),
                                 digits.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
            a.beta.emplace_back(
                digits.begin() + static_cast<std::ptrdiff_t>((g + i) * m),
                digits.begin() + static_cast<std::ptrdiff_t>((g + i + 1) * m));
        }
        std::vector<FpVec> handle_gens = a.alpha;
        handle_gens.insert(handle_gens.end(), a.beta.begin(), a.beta.end());
        std::size_t handle_rank = span_rank(p, m, handle_gens);
        for (std::size_t r = 0; r <= r_max; ++r)
            for (const auto& tuple : tuples_by_r[r]) {
                if (handle_rank < m) {
                    std::vector<FpVec> gens = handle_gens;
                    gens.insert(gens.end(), tuple.begin(), tuple.end());
                    if (span_rank(p, m, gens) != m)
                        continue;
                }
                ActionData b = a;
                b.branch = tuple;
                out.push_back(std::move(b));
            }
        std::size_t pos = digits.size();
        while (pos > 0) {
            --pos;
            if (++digits[pos] < p)
                break;
            digits[pos] = 0;
        }
        if (digits.empty() || (pos == 0 && digits[0] == 0))
            break;
    }
    return out;
}

namespace detail {

struct FlatKeyHash {
    std::size_t operator()(const std::vector<u32>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (u32 x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline std::vector<u32> action_key(const ActionData& a) {
    std::vector<u32> key;
    key.reserve(1 + (2 * a.g + a.branch.size()) * a.m);
    key.push_back(static_cast<u32>(a.branch.size()));
    for (const FpVec& v : a.alpha)
        key.insert(key.end(), v.begin(), v.end());
    for (const FpVec& v : a.beta)
        key.insert(key.end(), v.begin(), v.end());
    for (const FpVec& v : a.branch)
        key.insert(key.end(), v.begin(), v.end());
    return key;
}

// right action of a basis change on the handle-image block
inline ActionData apply_handle_change(const ActionData& a, const FpMatrix& m) {
    ActionData b = a;
    std::size_t g = a.g;
    for (std::size_t j = 0; j < 2 * g; ++j) {
        FpVec col(a.m, 0);
        for (std::size_t t = 0; t < g; ++t) {
            axpy(col, m.at(t, j), a.alpha[t], a.p);
            axpy(col, m.at(g + t, j), a.beta[t], a.p);
        }
        if (j < g)
            b.alpha[j] = std::move(col);
        else
            b.beta[j - g] = std::move(col);
    }
    return b;
}

inline ActionData apply_group_automorphism(const ActionData& a,
                                           const FpMatrix& m) {
    ActionData b = a;
    for (FpVec& v : b.alpha)
        v = mat_vec(m, v);
    for (FpVec& v : b.beta)
        v = mat_vec(m, v);
    for (FpVec& v : b.branch)
        v = mat_vec(m, v);
    std::sort(b.branch.begin(), b.branch.end());
    return b;
}

inline std::vector<FpMatrix> gl_generators(u32 p, std::size_t m) {
    std::vector<FpMatrix> gens;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j)
                continue;
            for (u32 lam = 1; lam < p; ++lam) {
                FpMatrix e = FpMatrix::identity(p, m);
                e.at(i, j) = lam;
                gens.push_back(std::move(e));
            }
        }
    for (std::size_t i = 0; i < m; ++i)
        for (u32 d = 2; d < p; ++d) {
            FpMatrix e = FpMatrix::identity(p, m);
            e.at(i, i) = d;
            gens.push_back(std::move(e));
        }
    return gens;
}

} // namespace detail

struct BruteForceResult {
    // each orbit sorted by data key; orbits sorted by first member
    std::vector<std::vector<ActionData>> orbits;

    std::size_t class_count() const { return orbits.size(); }
    std::vector<ActionData> representatives() const {
        std::vector<ActionData> reps;
        reps.reserve(orbits.size());
        for (const auto& orb : orbits)
            reps.push_back(orb.front());
        return reps;
    }
};

/* Ground-truth classifier: partition all valid data into orbits of the
 * homeomorphism moves.  Generators of the move set:
 *   - right multiplication of the handle block by mod-p symplectic
 *     transvections (all integral basis changes of the quotient handles),
 *   - adding one branch image to one alpha or beta image (sliding a handle
 *     across a branch point),
 *   - branch relabelling, absorbed by keeping tuples sorted,
 *   - in weak mode, composing with GL(m, F_p) on the value side.
 * BFS over the finite data set; neighbours must stay inside the enumerated
 * universe, anything else is a bug. */
inline BruteForceResult brute_force_classes(u32 p, std::size_t m,
                                            std::size_t g, std::size_t r_max,
                                            EquivalenceMode mode,
                                            u64 guard = 1'000'000) {
    std::vector<ActionData> universe =
        enumerate_actions(p, m, g, r_max, guard);
    std::unordered_map<std::vector<u32>, std::size_t, detail::FlatKeyHash>
        index;
    index.reserve(universe.size() * 2);
    for (std::size_t i = 0; i < universe.size(); ++i)
        index.emplace(detail::action_key(universe[i]), i);

    std::vector<FpMatrix> sp_moves;
    if (g > 0) {
        AlternatingForm ab = ab_block_form(p, g);
        std::set<std::vector<u32>> seen;
        FpVec v(2 * g, 0);
        for (;;) {
            std::size_t pos = v.size();
            while (pos > 0) {
                --pos;
                if (++v[pos] < p)
                    break;
                v[pos] = 0;
            }
            if (pos == 0 && v[0] == 0)
                break;
            FpMatrix t = transvection(ab, v);
            if (seen.insert(t.e).second)
                sp_moves.push_back(std::move(t));
        }
    }
    std::vector<FpMatrix> gl_moves;
    if (mode == EquivalenceMode::weak)
        gl_moves = detail::gl_generators(p, m);

    std::vector<bool> visited(universe.size(), false);
    BruteForceResult result;
    for (std::size_t seed = 0; seed < universe.size(); ++seed) {
        if (visited[seed])
            continue;
        std::vector<std::size_t> orbit;
        std::deque<std::size_t> frontier;
        visited[seed] = true;
        frontier.push_back(seed);
        orbit.push_back(seed);
        auto push = [&](const ActionData& nb) {
            auto it = index.find(detail::action_key(nb));
            if (it == index.end())
                throw std::logic_error(
                    "orbit move left the enumerated universe");
            if (!visited[it->second]) {
                visited[it->second] = true;
                frontier.push_back(it->second);
                orbit.push_back(it->second);
            }
        };
        while (!frontier.empty()) {
            const ActionData cur = universe[frontier.front()];
            frontier.pop_front();
            for (const FpMatrix& mv : sp_moves)
                push(detail::apply_handle_change(cur, mv));
            std::vector<FpVec> distinct = cur.branch;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()),
                           distinct.end());
            for (std::size_t i = 0; i < cur.g; ++i)
                for (const FpVec& c : distinct) {
                    ActionData t = cur;
                    t.alpha[i] = add_vec(t.alpha[i], c, p);
                    push(t);
                    t = cur;
                    t.beta[i] = add_vec(t.beta[i], c, p);
                    push(t);
                }
            for (const FpMatrix& mv : gl_moves)
                push(detail::apply_group_automorphism(cur, mv));
        }
        std::sort(orbit.begin(), orbit.end());
        std::vector<ActionData> members;
        members.reserve(orbit.size());
        for (std::size_t i : orbit)
            members.push_back(universe[i]);
        result.orbits.push_back(std::move(members));
    }
    std::sort(result.orbits.begin(), result.orbits.end(),
              [](const auto& x, const auto& y) {
                  return detail::action_key(x.front()) <
                         detail::action_key(y.front());
              });
    return result;
}

} // namespace zpmact
