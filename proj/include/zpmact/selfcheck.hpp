#pragma once

#include "oracle.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace zpmact {

struct CheckOutcome {
    std::string name;
    bool ok = false;
    std::string detail;
    double seconds = 0.0;
};

namespace checks {

inline FpVec random_vec(std::mt19937& rng, u32 p, std::size_t m) {
    std::uniform_int_distribution<u32> dist(0, p - 1);
    FpVec v(m);
    for (u32& x : v)
        x = dist(rng);
    return v;
}

inline FpVec random_nonzero_vec(std::mt19937& rng, u32 p, std::size_t m) {
    for (;;) {
        FpVec v = random_vec(rng, p, m);
        if (!is_zero_vec(v))
            return v;
    }
}

inline AlternatingForm random_alternating_form(std::mt19937& rng, u32 p,
                                               std::size_t m) {
    std::uniform_int_distribution<u32> dist(0, p - 1);
    FpMatrix gram(p, m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            u32 v = dist(rng);
            gram.at(i, j) = v;
            gram.at(j, i) = neg_mod(v, p);
        }
    return AlternatingForm(std::move(gram));
}

// random word in transvections: lands in the isometry group of f
inline FpMatrix random_isometry(std::mt19937& rng, const AlternatingForm& f,
                                std::size_t word_len) {
    FpMatrix m = FpMatrix::identity(f.p, f.dim);
    for (std::size_t i = 0; i < word_len; ++i)
        m = mat_mul(m, transvection(f, random_nonzero_vec(rng, f.p, f.dim)));
    return m;
}

inline ActionData random_valid_action(std::mt19937& rng, u32 p, std::size_t m,
                                      std::size_t g, std::size_t r) {
    for (std::size_t attempt = 0; attempt < 4000; ++attempt) {
        ActionData a;
        a.p = p;
        a.m = m;
        a.g = g;
        for (std::size_t i = 0; i < g; ++i) {
            a.alpha.push_back(random_vec(rng, p, m));
            a.beta.push_back(random_vec(rng, p, m));
        }
        if (r > 0) {
            FpVec sum(m, 0);
            for (std::size_t j = 0; j + 1 < r; ++j) {
                FpVec c = random_nonzero_vec(rng, p, m);
                for (std::size_t t = 0; t < m; ++t)
                    sum[t] = add_mod(sum[t], c[t], p);
                a.branch.push_back(std::move(c));
            }
            FpVec last(m);
            for (std::size_t t = 0; t < m; ++t)
                last[t] = neg_mod(sum[t], p);
            if (is_zero_vec(last)) {
                continue;
            }
            a.branch.push_back(std::move(last));
        }
        if (is_valid(a))
            return a;
    }
    throw std::logic_error("no valid action found for these parameters");
}

inline CheckOutcome reduction_surjectivity(u32 p, std::size_t g,
                                           const Limits& lim = {}) {
    CheckOutcome out;
    out.name = "symplectic-reduction-surjectivity(p=" + std::to_string(p) +
               ",g=" + std::to_string(g) + ")";
    SurjectivityReport rep = verify_reduction_surjectivity(p, g, lim);
    out.ok = rep.ok;
    out.detail = "generated order " + std::to_string(rep.generated_order) +
                 ", full order " + std::to_string(rep.full_order);
    return out;
}

inline CheckOutcome adapted_basis_suite(std::size_t samples, u32 seed = 11) {
    CheckOutcome out;
    out.name = "adapted-basis-properties(" + std::to_string(samples) +
               " random forms)";
    std::mt19937 rng(seed);
    const u32 primes[] = {2, 3, 5};
    std::size_t done = 0;
    for (std::size_t it = 0; it < samples; ++it) {
        u32 p = primes[rng() % 3];
        std::size_t m = rng() % 7; // dimensions 0..6
        AlternatingForm f = random_alternating_form(rng, p, m);
        SymplecticBasis sb = symplectic_basis(f);
        std::size_t rk = rank_of(f.gram);
        if (!check_symplectic_basis(f, sb) || 2 * sb.s() != rk ||
            sb.k() != m - rk) {
            out.detail = "failed at sample " + std::to_string(it) + " (p=" +
                         std::to_string(p) + ", dim=" + std::to_string(m) +
                         ")";
            return out;
        }
        ++done;
    }
    out.ok = true;
    out.detail = std::to_string(done) + " forms reduced and verified";
    return out;
}

inline CheckOutcome isometry_extension_suite(std::size_t samples,
                                             std::size_t max_genus,
                                             u32 seed = 23) {
    CheckOutcome out;
    out.name = "isometry-extension-properties(" + std::to_string(samples) +
               " random partial maps)";
    std::mt19937 rng(seed);
    const u32 primes[] = {2, 3};
    for (std::size_t it = 0; it < samples; ++it) {
        u32 p = primes[rng() % 2];
        std::size_t g = 1 + rng() % max_genus;
        StandardSymplecticSpace sp = standard_form(p, g);
        FpMatrix target = random_isometry(rng, sp.form, 4 + rng() % 8);
        std::size_t t = rng() % (2 * g + 1);
        std::vector<FpVec> u, v;
        for (std::size_t i = 0; i < t; ++i) {
            FpVec x = random_vec(rng, p, 2 * g);
            v.push_back(mat_vec(target, x));
            u.push_back(std::move(x));
        }
        FpMatrix psi = FpMatrix::identity(p, t);
        FpMatrix ext = extend_isometry(sp, u, v, psi);
        FpMatrix check =
            mat_mul(mat_mul(ext.transpose(), sp.form.gram), ext);
        bool good = check == sp.form.gram;
        for (std::size_t i = 0; good && i < t; ++i)
            good = mat_vec(ext, u[i]) == v[i];
        if (!good) {
            out.detail = "failed at sample " + std::to_string(it);
            return out;
        }
    }
    out.ok = true;
    out.detail = std::to_string(samples) + " partial maps extended";
    return out;
}

inline CheckOutcome riemann_hurwitz_suite(std::size_t samples, u32 seed = 37,
                                          const Limits& lim = {}) {
    CheckOutcome out;
    out.name = "riemann-hurwitz-vs-cover(" + std::to_string(samples) +
               " random actions)";
    std::mt19937 rng(seed);

    std::vector<ActionData> cases;
    // hyperelliptic involution: genus-2 double cover of the sphere
    cases.push_back({2, 1, 0, {}, {}, {{1}, {1}, {1}, {1}, {1}, {1}}});
    // torus as cyclic triple cover of the sphere
    cases.push_back({3, 1, 0, {}, {}, {{1}, {1}, {1}}});
    // unbranched double cover of a genus-2 surface
    cases.push_back({2, 1, 2, {{1}, {0}}, {{0}, {0}}, {}});
    std::vector<u64> expected = {2, 1, 3};

    for (std::size_t i = 0; i < cases.size(); ++i) {
        u64 direct = total_genus(cases[i]);
        u64 via_cover = cover_genus(build_cover(cases[i], lim));
        if (direct != expected[i] || via_cover != expected[i]) {
            out.detail = "fixture " + std::to_string(i) + ": formula " +
                         std::to_string(direct) + ", cover " +
                         std::to_string(via_cover) + ", expected " +
                         std::to_string(expected[i]);
            return out;
        }
    }

    const u32 primes[] = {2, 3, 5, 7};
    for (std::size_t it = 0; it < samples; ++it) {
        u32 p = primes[rng() % 4];
        std::size_t max_m = 1;
        while (pow_saturating(p, max_m + 1, lim.max_sheets) <= lim.max_sheets &&
               max_m < 6)
            ++max_m;
        std::size_t m = 1 + rng() % max_m;
        std::size_t g = rng() % 4;
        std::size_t r = rng() % 7;
        if (r == 1)
            r = 2;
        if (p == 2 && m == 1 && r % 2 == 1)
            ++r;
        if (2 * g + (r ? r - 1 : 0) < m) {
            --it;
            continue;
        }
        u64 sheets = pow_saturating(p, m, lim.max_sheets);
        if (sheets > lim.max_sheets ||
            sheets * (2 * static_cast<u64>(g) + r) > 100000) {
            --it;
            continue;
        }
        ActionData a = random_valid_action(rng, p, m, g, r);
        PermutationCover cov = build_cover(a, lim);
        if (!is_connected(cov)) {
            out.detail = "disconnected cover at sample " + std::to_string(it);
            return out;
        }
        if (total_genus(a) != cover_genus(cov)) {
            out.detail = "genus mismatch at sample " + std::to_string(it) +
                         " (p=" + std::to_string(p) + ", m=" +
                         std::to_string(m) + ", g=" + std::to_string(g) +
                         ", r=" + std::to_string(r) + ")";
            return out;
        }
    }
    out.ok = true;
    out.detail = "fixtures + " + std::to_string(samples) +
                 " random instances agree";
    return out;
}

/* Random walk through the strong move set; the strong invariant must be
 * constant along the walk.  In weak mode the walk also composes with
 * random group automorphisms and the weak invariant is tracked instead. */
inline CheckOutcome invariance_suite(std::size_t moves_per_fixture,
                                     u32 seed = 53) {
    CheckOutcome out;
    out.name = "invariant-move-invariance(" +
               std::to_string(moves_per_fixture) + " moves per fixture)";
    std::mt19937 rng(seed);

    std::vector<ActionData> fixtures;
    fixtures.push_back({2, 1, 0, {}, {}, {{1}, {1}, {1}, {1}, {1}, {1}}});
    fixtures.push_back({3, 1, 1, {{1}}, {{0}}, {{1}, {2}}});
    fixtures.push_back(
        {2, 2, 1, {{1, 0}}, {{0, 0}}, {{0, 1}, {0, 1}}});
    fixtures.push_back({3, 2, 2,
                        {{1, 0}, {0, 1}},
                        {{0, 1}, {0, 0}},
                        {}});
    fixtures.push_back({5, 1, 1, {{1}}, {{2}}, {{1}, {4}, {2}, {3}}});

    for (std::size_t fi = 0; fi < fixtures.size(); ++fi) {
        const ActionData& base = fixtures[fi];
        if (!is_valid(base))
            throw std::logic_error("invariance fixture invalid");
        StrongInvariant s0 = strong_invariant(base);
        WeakInvariant w0 = weak_invariant(base);
        AlternatingForm ab = ab_block_form(base.p, base.g);
        std::vector<FpMatrix> gl = detail::gl_generators(base.p, base.m);

        ActionData strong_walk = base;
        ActionData weak_walk = base;
        for (std::size_t mv = 0; mv < moves_per_fixture; ++mv) {
            u32 kind = rng() % 3;
            auto strong_move = [&](ActionData& a) {
                if (kind == 0 && a.g > 0) {
                    FpVec v = random_nonzero_vec(rng, a.p, 2 * a.g);
                    a = detail::apply_handle_change(a, transvection(ab, v));
                } else if (kind == 1 && a.g > 0 && !a.branch.empty()) {
                    std::size_t i = rng() % a.g;
                    const FpVec& c = a.branch[rng() % a.branch.size()];
                    if (rng() % 2)
                        a.alpha[i] = add_vec(a.alpha[i], c, a.p);
                    else
                        a.beta[i] = add_vec(a.beta[i], c, a.p);
                } else {
                    std::shuffle(a.branch.begin(), a.branch.end(), rng);
                }
            };
            strong_move(strong_walk);
            if (!(strong_invariant(strong_walk) == s0)) {
                out.detail = "strong invariant drifted (fixture " +
                             std::to_string(fi) + ", move " +
                             std::to_string(mv) + ")";
                return out;
            }
            strong_move(weak_walk);
            if (!gl.empty() && rng() % 2) {
                const FpMatrix& gamma = gl[rng() % gl.size()];
                weak_walk = detail::apply_group_automorphism(weak_walk, gamma);
            }
            if (!(weak_invariant(weak_walk) == w0)) {
                out.detail = "weak invariant drifted (fixture " +
                             std::to_string(fi) + ", move " +
                             std::to_string(mv) + ")";
                return out;
            }
        }
    }
    out.ok = true;
    out.detail = std::to_string(fixtures.size()) + " fixtures x " +
                 std::to_string(moves_per_fixture) + " moves";
    return out;
}

constexpr std::size_t no_expectation = static_cast<std::size_t>(-1);

inline CheckOutcome strong_oracle(u32 p, std::size_t m, std::size_t g,
                                  std::size_t r_max,
                                  std::size_t expected = no_expectation,
                                  u64 guard = 1'000'000) {
    CheckOutcome out;
    out.name = "strong-classifier-vs-orbit-oracle(" + std::to_string(p) + "," +
               std::to_string(m) + "," + std::to_string(g) + "," +
               std::to_string(r_max) + ")";
    BruteForceResult res =
        brute_force_classes(p, m, g, r_max, EquivalenceMode::strong, guard);
    std::size_t data_count = 0;
    std::set<std::vector<u32>> distinct; // serialized strong invariants
    auto key_of = [](const StrongInvariant& si) {
        std::vector<u32> key;
        key.push_back(static_cast<u32>(si.g));
        key.push_back(static_cast<u32>(si.g_total));
        key.push_back(static_cast<u32>(si.k));
        auto put = [&key](const std::vector<FpVec>& vs) {
            key.push_back(static_cast<u32>(vs.size()));
            for (const FpVec& v : vs)
                key.insert(key.end(), v.begin(), v.end());
        };
        put(si.branch_multiset);
        put(si.gfix_basis);
        put(si.ann_basis);
        key.insert(key.end(), si.gram.e.begin(), si.gram.e.end());
        return key;
    };
    for (const auto& orbit : res.orbits) {
        data_count += orbit.size();
        StrongInvariant rep = strong_invariant(orbit.front());
        for (const ActionData& a : orbit)
            if (!(strong_invariant(a) == rep)) {
                out.detail = "strong invariant not constant on an orbit";
                return out;
            }
        distinct.insert(key_of(rep));
    }
    if (distinct.size() != res.orbits.size()) {
        out.detail = "distinct invariants " + std::to_string(distinct.size()) +
                     " != orbit count " + std::to_string(res.orbits.size());
        return out;
    }
    if (expected != no_expectation && res.orbits.size() != expected) {
        out.detail = "orbit count " + std::to_string(res.orbits.size()) +
                     " != expected " + std::to_string(expected);
        return out;
    }
    out.ok = true;
    out.detail = std::to_string(data_count) + " data in " +
                 std::to_string(res.orbits.size()) + " orbits";
    return out;
}

inline CheckOutcome weak_oracle(u32 p, std::size_t m, std::size_t g,
                                std::size_t r_max,
                                std::size_t expected = no_expectation,
                                u64 guard = 1'000'000) {
    CheckOutcome out;
    out.name = "weak-classifier-vs-orbit-oracle(" + std::to_string(p) + "," +
               std::to_string(m) + "," + std::to_string(g) + "," +
               std::to_string(r_max) + ")";
    BruteForceResult res =
        brute_force_classes(p, m, g, r_max, EquivalenceMode::weak, guard);
    auto wi_less = [](const WeakInvariant& a, const WeakInvariant& b) {
        return weak_invariant_less(a, b);
    };
    std::set<WeakInvariant, decltype(wi_less)> seen(wi_less);
    std::size_t data_count = 0;
    for (const auto& orbit : res.orbits) {
        data_count += orbit.size();
        WeakInvariant rep = weak_invariant(orbit.front());
        for (const ActionData& a : orbit)
            if (!(weak_invariant(a) == rep)) {
                out.detail = "weak invariant not constant on an orbit";
                return out;
            }
        if (!seen.insert(rep).second) {
            out.detail = "two orbits share a weak invariant";
            return out;
        }
    }
    Limits lim;
    lim.max_candidates = guard;
    std::vector<WeakInvariant> table = enumerate_weak_classes(p, m, g, r_max, lim);
    std::set<WeakInvariant, decltype(wi_less)> listed(wi_less);
    for (const WeakInvariant& wi : table)
        listed.insert(wi);
    if (listed.size() != table.size()) {
        out.detail = "enumeration produced duplicate classes";
        return out;
    }
    if (!(listed == seen)) {
        out.detail = "enumerated table (" + std::to_string(listed.size()) +
                     " classes) differs from orbit invariants (" +
                     std::to_string(seen.size()) + ")";
        return out;
    }
    if (expected != no_expectation && res.orbits.size() != expected) {
        out.detail = "orbit count " + std::to_string(res.orbits.size()) +
                     " != expected " + std::to_string(expected);
        return out;
    }
    out.ok = true;
    out.detail = std::to_string(data_count) + " data in " +
                 std::to_string(res.orbits.size()) +
                 " orbits, table agrees";
    return out;
}

inline CheckOutcome free_class_table() {
    CheckOutcome out;
    out.name = "free-class-table";
    if (enumerate_free_classes(2, 2) != std::vector<std::size_t>{0, 2} ||
        enumerate_free_classes(1, 1) != std::vector<std::size_t>{1} ||
        !enumerate_free_classes(3, 1).empty()) {
        out.detail = "frozen table rows changed";
        return out;
    }
    // p-independence: the k list must match the free rows for every p
    for (u32 p : {2u, 3u, 5u})
        for (std::size_t m = 1; m <= 3; ++m)
            for (std::size_t g = 0; g <= 3; ++g) {
                std::vector<std::size_t> ks = enumerate_free_classes(m, g);
                std::vector<std::size_t> from_weak;
                for (const WeakInvariant& wi :
                     enumerate_weak_classes(p, m, g, 0))
                    from_weak.push_back(wi.k);
                std::sort(from_weak.begin(), from_weak.end());
                if (ks != from_weak) {
                    out.detail = "free rows differ at (p=" + std::to_string(p) +
                                 ", m=" + std::to_string(m) + ", g=" +
                                 std::to_string(g) + ")";
                    return out;
                }
            }
    out.ok = true;
    out.detail = "frozen rows and p-independence hold";
    return out;
}

inline CheckOutcome constructor_roundtrip(std::size_t m_max, std::size_t g_max,
                                          std::size_t r_max) {
    CheckOutcome out;
    out.name = "constructor-roundtrip(p<=3, m<=" + std::to_string(m_max) +
               ", g<=" + std::to_string(g_max) + ", r<=" +
               std::to_string(r_max) + ")";
    std::size_t triples = 0;
    for (u32 p : {2u, 3u})
        for (std::size_t m = 1; m <= m_max; ++m)
            for (std::size_t g = 0; g <= g_max; ++g)
                for (const WeakInvariant& wi :
                     enumerate_weak_classes(p, m, g, r_max)) {
                    std::vector<FpVec> embedded;
                    for (const FpVec& v : wi.multiset) {
                        FpVec e = v;
                        e.resize(m, 0);
                        embedded.push_back(std::move(e));
                    }
                    ActionData a = construct_action(p, m, wi.k, g, embedded);
                    if (!(weak_invariant(a) == wi)) {
                        out.detail =
                            "round trip failed at (p=" + std::to_string(p) +
                            ", m=" + std::to_string(m) + ", g=" +
                            std::to_string(g) + ", k=" + std::to_string(wi.k) +
                            ", n=" + std::to_string(wi.n) + ", r=" +
                            std::to_string(wi.multiset.size()) + ")";
                        return out;
                    }
                    ++triples;
                }
    out.ok = true;
    out.detail = std::to_string(triples) + " admissible triples round-trip";
    return out;
}

} // namespace checks

template <typename Fn>
inline CheckOutcome timed_check(Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    CheckOutcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
        if (out.name.empty())
            out.name = "unnamed check";
    }
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return out;
}

inline bool run_selfcheck(bool full, const Limits& lim, std::ostream& os) {
    std::vector<std::function<CheckOutcome()>> suite;
    suite.push_back([&] { return checks::reduction_surjectivity(2, 1, lim); });
    suite.push_back([&] { return checks::reduction_surjectivity(3, 1, lim); });
    if (full)
        suite.push_back(
            [&] { return checks::reduction_surjectivity(2, 2, lim); });
    suite.push_back(
        [&] { return checks::adapted_basis_suite(full ? 200 : 60); });
    suite.push_back([&] {
        return checks::isometry_extension_suite(full ? 100 : 40, full ? 3 : 2);
    });
    suite.push_back(
        [&] { return checks::riemann_hurwitz_suite(full ? 100 : 25, 37, lim); });
    suite.push_back([&] { return checks::invariance_suite(full ? 100 : 15); });
    suite.push_back([&] { return checks::free_class_table(); });
    suite.push_back([&] { return checks::strong_oracle(2, 1, 1, 0); });
    suite.push_back([&] { return checks::weak_oracle(2, 1, 1, 0); });
    suite.push_back([&] { return checks::strong_oracle(3, 1, 0, 3); });
    suite.push_back([&] { return checks::weak_oracle(3, 1, 0, 3); });
    if (full) {
        for (auto [p, m, g, r] :
             {std::array<std::size_t, 4>{2, 2, 2, 0},
              std::array<std::size_t, 4>{2, 1, 0, 4},
              std::array<std::size_t, 4>{2, 2, 1, 2}}) {
            suite.push_back([=] {
                return checks::strong_oracle(static_cast<u32>(p), m, g, r);
            });
            suite.push_back([=] {
                return checks::weak_oracle(static_cast<u32>(p), m, g, r);
            });
        }
        suite.push_back([] { return checks::constructor_roundtrip(3, 3, 4); });
    } else {
        suite.push_back([] { return checks::constructor_roundtrip(2, 2, 3); });
    }

    bool all_ok = true;
    for (auto& fn : suite) {
        CheckOutcome out = timed_check(fn);
        all_ok = all_ok && out.ok;
        std::ostringstream line;
        line << (out.ok ? "PASS" : "FAIL") << "  " << out.name << ": "
             << out.detail << "  [" << std::fixed << std::setprecision(2)
             << out.seconds << "s]";
        os << line.str() << "\n";
    }
    os << (all_ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
    return all_ok;
}

} // namespace zpmact
