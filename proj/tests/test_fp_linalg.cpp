#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include <zpmact/fp_matrix.hpp>

using namespace zpmact;

namespace {

FpMatrix random_matrix(std::mt19937& rng, u32 p, std::size_t rows,
                       std::size_t cols) {
  FpMatrix m(p, rows, cols);
  for (auto& x : m.e) x = rng() % p;
  return m;
}

// Every vector of F_p^n, as an odometer.  Only used where p^n is tiny.
std::vector<FpVec> all_vectors(u32 p, std::size_t n) {
  std::vector<FpVec> out;
  FpVec v(n, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == p) v[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("primality and modulus range") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(32749));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(32767));  // 7 * 31 * 151

  CHECK_THROWS_AS(check_prime(6), error);
  CHECK_THROWS_WITH(check_prime(6),
                    Catch::Matchers::ContainsSubstring("not prime"));
  // 32771 is prime but one past the supported range.
  CHECK_THROWS_WITH(check_prime(32771),
                    Catch::Matchers::ContainsSubstring("out of range"));
}

TEST_CASE("scalar arithmetic") {
  FpScalar a{5, 3}, b{5, 4};
  CHECK((a + b).value == 2);
  CHECK((a - b).value == 4);
  CHECK((a * b).value == 2);
  CHECK((a / b).value == 2);  // 3 * 4^{-1} = 3 * 4 = 12 = 2
  CHECK((-a).value == 2);
  CHECK(b.inverse().value == 4);

  CHECK(reduce_mod(-3, 7) == 4);
  CHECK(reduce_mod(-14, 7) == 0);
  CHECK(inv_mod(1, 2) == 1);
  CHECK_THROWS_WITH(inv_mod(0, 5),
                    Catch::Matchers::ContainsSubstring("no inverse"));

  FpScalar c{7, 1};
  CHECK_THROWS_WITH(a + c, Catch::Matchers::ContainsSubstring("mixed moduli"));
}

TEST_CASE("rref canonical form") {
  SECTION("identity is fixed") {
    auto id = FpMatrix::identity(3, 4);
    auto r = rref(id);
    CHECK(r.mat == id);
    CHECK(r.rank == 4);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2, 3});
  }
  SECTION("proportional rows collapse") {
    FpMatrix m(5, {{1, 2}, {2, 4}});
    auto r = rref(m);
    CHECK(r.rank == 1);
    CHECK(r.pivots == std::vector<std::size_t>{0});
    CHECK(r.mat == FpMatrix(5, {{1, 2}, {0, 0}}));
  }
  SECTION("pivot restriction to a column prefix") {
    // Augmented layout [A | B]: pivots must stay inside A's columns.
    FpMatrix m(3, {{0, 1, 1, 0}, {0, 2, 0, 1}});
    auto r = rref(m, 2);
    CHECK(r.rank == 1);
    CHECK(r.pivots == std::vector<std::size_t>{1});
    CHECK(r.mat.at(1, 0) == 0);
    CHECK(r.mat.at(1, 1) == 0);
  }
  SECTION("idempotence and transpose rank, randomized") {
    std::mt19937 rng(2024);
    for (int it = 0; it < 500; ++it) {
      u32 p = std::array<u32, 3>{2, 3, 5}[rng() % 3];
      std::size_t rows = rng() % 8, cols = rng() % 8;
      auto m = random_matrix(rng, p, rows, cols);
      auto r = rref(m);
      CHECK(rref(r.mat).mat == r.mat);
      CHECK(r.rank == rank_of(m.transpose()));
      CHECK(r.rank <= std::min(rows, cols));
    }
  }
}

TEST_CASE("kernel basis") {
  SECTION("full rank has trivial kernel") {
    CHECK(kernel_basis(FpMatrix::identity(7, 3)).empty());
  }
  SECTION("one relation over F_5, against exhaustive enumeration") {
    FpMatrix m(5, {{1, 2}});
    auto basis = kernel_basis(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == FpVec{3, 1});

    std::set<FpVec> solutions;
    for (const auto& v : all_vectors(5, 2))
      if (is_zero_vec(mat_vec(m, v))) solutions.insert(v);
    CHECK(solutions.size() == 5);
    std::set<FpVec> span;
    for (u32 t = 0; t < 5; ++t) span.insert(scale_vec(basis[0], t, 5));
    CHECK(span == solutions);
  }
  SECTION("random: basis vectors solve, count matches corank") {
    std::mt19937 rng(99);
    for (int it = 0; it < 200; ++it) {
      u32 p = std::array<u32, 3>{2, 3, 5}[rng() % 3];
      std::size_t rows = rng() % 6, cols = rng() % 6;
      auto m = random_matrix(rng, p, rows, cols);
      auto basis = kernel_basis(m);
      CHECK(basis.size() == cols - rank_of(m));
      for (const auto& v : basis) CHECK(is_zero_vec(mat_vec(m, v)));
      if (!basis.empty()) CHECK(span_rank(p, cols, basis) == basis.size());
    }
  }
}

TEST_CASE("linear solve") {
  SECTION("unique solution over F_2") {
    FpMatrix a(2, {{1, 1}, {0, 1}});
    auto x = solve(a, {0, 1});
    REQUIRE(x.has_value());
    CHECK(*x == FpVec{1, 1});
    int hits = 0;
    for (const auto& v : all_vectors(2, 2))
      if (mat_vec(a, v) == FpVec{0, 1}) ++hits;
    CHECK(hits == 1);
  }
  SECTION("inconsistent system") {
    FpMatrix a(2, {{1}, {1}});
    CHECK_FALSE(solve(a, {0, 1}).has_value());
  }
  SECTION("dimension mismatch") {
    FpMatrix a(2, {{1}, {1}});
    CHECK_THROWS_WITH(solve(a, {0, 1, 0}),
                      Catch::Matchers::ContainsSubstring("dimension mismatch"));
  }
  SECTION("random against exhaustive search") {
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
      u32 p = (rng() % 2) ? 2 : 3;
      std::size_t rows = rng() % 4, cols = rng() % 4;
      auto a = random_matrix(rng, p, rows, cols);
      FpVec b(rows);
      for (auto& x : b) x = rng() % p;
      auto x = solve(a, b);
      bool exists = false;
      for (const auto& v : all_vectors(p, cols))
        if (mat_vec(a, v) == b) {
          exists = true;
          break;
        }
      CHECK(x.has_value() == exists);
      if (x) CHECK(mat_vec(a, *x) == b);
    }
  }
}

TEST_CASE("matrix inverse") {
  FpMatrix a(3, {{1, 1}, {1, 2}});
  auto inv = invert(a);
  REQUIRE(inv.has_value());
  CHECK(mat_mul(a, *inv) == FpMatrix::identity(3, 2));
  CHECK(mat_mul(*inv, a) == FpMatrix::identity(3, 2));
  CHECK_FALSE(invert(FpMatrix(3, {{1, 2}, {2, 4}})).has_value());

  std::mt19937 rng(55);
  for (int it = 0; it < 100; ++it) {
    u32 p = std::array<u32, 3>{2, 3, 5}[rng() % 3];
    std::size_t n = rng() % 5;
    auto m = random_matrix(rng, p, n, n);
    auto mi = invert(m);
    CHECK(mi.has_value() == (rank_of(m) == n));
    if (mi) CHECK(mat_mul(m, *mi) == FpMatrix::identity(p, n));
  }
}

TEST_CASE("row basis is a canonical span label") {
  std::mt19937 rng(31);
  for (int it = 0; it < 200; ++it) {
    u32 p = (rng() % 2) ? 2 : 5;
    std::size_t n = 1 + rng() % 5;
    std::vector<FpVec> vecs;
    std::size_t count = rng() % 4;
    for (std::size_t i = 0; i < count; ++i) {
      FpVec v(n);
      for (auto& x : v) x = rng() % p;
      vecs.push_back(v);
    }
    auto basis = row_basis(p, n, vecs);
    // Shuffling and rescaling the generators must not change the label.
    auto vecs2 = vecs;
    std::shuffle(vecs2.begin(), vecs2.end(), rng);
    for (auto& v : vecs2) v = scale_vec(v, 1 + rng() % (p - 1), p);
    CHECK(row_basis(p, n, vecs2) == basis);
    CHECK(span_rank(p, n, vecs) == basis.size());
  }
}

TEST_CASE("subspace operations") {
  SECTION("scaling does not change a line") {
    auto u = FpMatrix::from_rows(5, {{1, 0, 0}}, 3);
    auto v = FpMatrix::from_rows(5, {{2, 0, 0}}, 3);
    auto rel = subspace_ops(u, v);
    CHECK(rel.equal);
    CHECK(rel.u_contains_v);
    CHECK(rel.v_contains_u);
  }
  SECTION("plane and a contained line over F_2") {
    auto u = FpMatrix::from_rows(2, {{1, 0, 0}, {0, 1, 0}}, 3);
    auto v = FpMatrix::from_rows(2, {{1, 1, 0}}, 3);
    auto rel = subspace_ops(u, v);
    CHECK_FALSE(rel.equal);
    CHECK(rel.u_contains_v);
    CHECK_FALSE(rel.v_contains_u);
    CHECK(rel.intersection == v.row_list());
    CHECK(rel.sum == u.row_list());
  }
  SECTION("transverse lines") {
    auto u = FpMatrix::from_rows(3, {{1, 0}}, 2);
    auto v = FpMatrix::from_rows(3, {{0, 1}}, 2);
    auto rel = subspace_ops(u, v);
    CHECK(rel.intersection.empty());
    CHECK(rel.sum == FpMatrix::identity(3, 2).row_list());
  }
  SECTION("mismatch errors") {
    auto u = FpMatrix::from_rows(2, {{1}}, 1);
    auto v = FpMatrix::from_rows(3, {{1}}, 1);
    CHECK_THROWS_WITH(subspace_ops(u, v),
                      Catch::Matchers::ContainsSubstring("mixed moduli"));
    auto w = FpMatrix::from_rows(2, {{1, 0}}, 2);
    CHECK_THROWS_WITH(subspace_ops(u, w),
                      Catch::Matchers::ContainsSubstring("ambient dimensions"));
  }
  SECTION("dimension formula, randomized") {
    std::mt19937 rng(12);
    for (int it = 0; it < 200; ++it) {
      u32 p = (rng() % 2) ? 2 : 3;
      std::size_t n = 1 + rng() % 4;
      auto mk = [&](std::size_t count) {
        std::vector<FpVec> vs;
        for (std::size_t i = 0; i < count; ++i) {
          FpVec v(n);
          for (auto& x : v) x = rng() % p;
          vs.push_back(v);
        }
        return FpMatrix::from_rows(p, row_basis(p, n, vs), n);
      };
      auto u = mk(rng() % 3), v = mk(rng() % 3);
      auto rel = subspace_ops(u, v);
      CHECK(rel.sum.size() + rel.intersection.size() == u.rows + v.rows);
      CHECK(span_contains(p, n, u.row_list(), rel.intersection));
      CHECK(span_contains(p, n, v.row_list(), rel.intersection));
      CHECK(span_contains(p, n, rel.sum, u.row_list()));
      CHECK(span_contains(p, n, rel.sum, v.row_list()));
      CHECK(rel.equal == (rel.u_contains_v && rel.v_contains_u));
      CHECK(spans_equal(p, n, rel.sum, rel.sum));
    }
  }
}
