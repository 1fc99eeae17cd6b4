#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>

#include <zpmact/oracle.hpp>
#include <zpmact/selfcheck.hpp>

using namespace zpmact;

namespace {

ActionData hyperelliptic() {
  ActionData a;
  a.p = 2;
  a.m = 1;
  a.g = 0;
  a.branch = {{1}, {1}, {1}, {1}, {1}, {1}};
  return a;
}

}  // namespace

TEST_CASE("sheet coding") {
  for (std::size_t s = 0; s < 9; ++s)
    CHECK(sheet_of_vec(vec_of_sheet(s, 3, 2), 3) == s);
  CHECK(vec_of_sheet(5, 3, 2) == FpVec{2, 1});  // little-endian digits

  // translating by t then by u is translating by t + u
  FpVec t{1, 2}, u{2, 2};
  auto pt = translation_perm(t, 3, 9);
  auto pu = translation_perm(u, 3, 9);
  auto ptu = translation_perm(add_vec(t, u, 3), 3, 9);
  for (std::size_t s = 0; s < 9; ++s) CHECK(pu[pt[s]] == ptu[s]);
}

TEST_CASE("covers of the sphere and the torus") {
  SECTION("hyperelliptic double cover") {
    auto cov = build_cover(hyperelliptic());
    CHECK(cov.degree == 2);
    REQUIRE(cov.branch.size() == 6);
    for (const auto& perm : cov.branch) CHECK(cycle_count(perm) == 1);
    CHECK(cover_genus(cov) == 2);
    CHECK(is_connected(cov));
    // the product of all branch translations is the identity
    std::vector<u32> prod(cov.degree);
    std::iota(prod.begin(), prod.end(), 0);
    for (const auto& perm : cov.branch)
      for (auto& x : prod) x = perm[x];
    for (std::size_t s = 0; s < cov.degree; ++s) CHECK(prod[s] == s);
  }
  SECTION("triple cover of the sphere branched three times") {
    ActionData a;
    a.p = 3;
    a.m = 1;
    a.g = 0;
    a.branch = {{1}, {1}, {1}};
    auto cov = build_cover(a);
    CHECK(cov.degree == 3);
    for (const auto& perm : cov.branch) CHECK(cycle_count(perm) == 1);
    CHECK(cover_genus(cov) == 1);
  }
  SECTION("unbranched four-sheeted cover of the torus") {
    ActionData a;
    a.p = 2;
    a.m = 2;
    a.g = 1;
    a.alpha = {{1, 0}};
    a.beta = {{0, 1}};
    auto cov = build_cover(a);
    CHECK(cov.degree == 4);
    CHECK(cover_genus(cov) == 1);
    CHECK(is_connected(cov));
  }
  SECTION("genus doubling unbranched cover") {
    ActionData a;
    a.p = 2;
    a.m = 1;
    a.g = 2;
    a.alpha = {{1}, {0}};
    a.beta = {{0}, {0}};
    CHECK(cover_genus(build_cover(a)) == 3);
  }
  SECTION("fiber sizes over branch points") {
    ActionData a;
    a.p = 3;
    a.m = 2;
    a.g = 1;
    a.alpha = {{1, 0}};
    a.beta = {{0, 0}};
    a.branch = {{0, 1}, {0, 2}};
    auto cov = build_cover(a);
    CHECK(cov.degree == 9);
    // each branch translation has order 3, so 9/3 cycles
    for (const auto& perm : cov.branch) CHECK(cycle_count(perm) == 3);
    CHECK(cover_genus(cov) == total_genus(a));
  }
  SECTION("degree guard") {
    ActionData a;
    a.p = 2;
    a.m = 13;
    a.g = 7;
    a.alpha.assign(7, FpVec(13, 0));
    a.beta.assign(7, FpVec(13, 0));
    for (std::size_t i = 0; i < 7; ++i) a.alpha[i][i] = 1;
    for (std::size_t i = 0; i < 6; ++i) a.beta[i][7 + i] = 1;
    CHECK_THROWS_AS(build_cover(a), guard_error);
    Limits relaxed;
    relaxed.max_sheets = 1u << 14;
    CHECK(cover_genus(build_cover(a, relaxed)) == total_genus(a));
  }
}

TEST_CASE("disconnected data never validates") {
  // Hand-built cover with trivial translations: two components.
  PermutationCover cov;
  cov.p = 2;
  cov.m = 1;
  cov.degree = 2;
  cov.base_genus = 1;
  cov.alpha = {translation_perm({0}, 2, 2)};
  cov.beta = {translation_perm({0}, 2, 2)};
  CHECK_FALSE(is_connected(cov));

  ActionData a;
  a.p = 2;
  a.m = 1;
  a.g = 1;
  a.alpha = {{0}};
  a.beta = {{0}};
  CHECK_FALSE(is_valid(a));
}

TEST_CASE("exhaustive action enumeration") {
  SECTION("frozen universe sizes") {
    CHECK(enumerate_actions(2, 1, 1, 0).size() == 3);
    CHECK(enumerate_actions(2, 2, 2, 0).size() == 210);
    CHECK(enumerate_actions(2, 1, 0, 4).size() == 2);
    CHECK(enumerate_actions(3, 1, 0, 3).size() == 3);
    CHECK(enumerate_actions(2, 2, 1, 2).size() == 42);
  }
  SECTION("members are valid, sorted-branch, pairwise distinct") {
    auto all = enumerate_actions(2, 2, 1, 2);
    std::set<std::vector<u32>> keys;
    for (const auto& a : all) {
      CHECK(is_valid(a));
      CHECK(std::is_sorted(a.branch.begin(), a.branch.end()));
      CHECK(keys.insert(detail::action_key(a)).second);
    }
  }
  SECTION("guard") {
    CHECK_THROWS_AS(enumerate_actions(3, 2, 3, 0, 1000), guard_error);
  }
}

TEST_CASE("orbit oracle, strong mode") {
  SECTION("frozen class counts on the desk grid") {
    CHECK(brute_force_classes(2, 1, 1, 0, EquivalenceMode::strong).class_count() == 1);
    CHECK(brute_force_classes(2, 2, 2, 0, EquivalenceMode::strong).class_count() == 2);
    CHECK(brute_force_classes(2, 1, 0, 4, EquivalenceMode::strong).class_count() == 2);
    CHECK(brute_force_classes(3, 1, 0, 3, EquivalenceMode::strong).class_count() == 3);
    CHECK(brute_force_classes(2, 2, 1, 2, EquivalenceMode::strong).class_count() == 4);
  }
  SECTION("orbits partition the universe") {
    auto res = brute_force_classes(2, 2, 1, 2, EquivalenceMode::strong);
    std::size_t total = 0;
    std::set<std::vector<u32>> seen;
    for (const auto& orbit : res.orbits) {
      total += orbit.size();
      for (const auto& a : orbit) CHECK(seen.insert(detail::action_key(a)).second);
    }
    CHECK(total == 42);
    CHECK(res.representatives().size() == res.class_count());
  }
  SECTION("classifier agreement, including invariant constancy") {
    auto out = checks::strong_oracle(2, 2, 1, 2, 4);
    INFO(out.detail);
    CHECK(out.ok);
  }
}

TEST_CASE("orbit oracle, weak mode") {
  SECTION("frozen class counts on the desk grid") {
    CHECK(brute_force_classes(2, 1, 1, 0, EquivalenceMode::weak).class_count() == 1);
    CHECK(brute_force_classes(2, 2, 2, 0, EquivalenceMode::weak).class_count() == 2);
    CHECK(brute_force_classes(2, 1, 0, 4, EquivalenceMode::weak).class_count() == 2);
    CHECK(brute_force_classes(3, 1, 0, 3, EquivalenceMode::weak).class_count() == 2);
    CHECK(brute_force_classes(2, 2, 1, 2, EquivalenceMode::weak).class_count() == 2);
  }
  SECTION("weak orbits are unions of strong orbits") {
    auto ws = brute_force_classes(3, 1, 0, 3, EquivalenceMode::weak);
    REQUIRE(ws.class_count() == 2);
    std::size_t total = 0;
    for (const auto& orbit : ws.orbits) total += orbit.size();
    CHECK(total == 3);
  }
  SECTION("classifier agreement with the enumeration table") {
    auto out = checks::weak_oracle(3, 1, 0, 3, 2);
    INFO(out.detail);
    CHECK(out.ok);
  }
  SECTION("guard propagates") {
    CHECK_THROWS_AS(
        brute_force_classes(2, 2, 2, 2, EquivalenceMode::strong, 100),
        guard_error);
  }
}
