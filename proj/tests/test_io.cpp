#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <zpmact/json_io.hpp>

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

ActionData branched_two_torus() {
  ActionData a;
  a.p = 2;
  a.m = 2;
  a.g = 1;
  a.alpha = {{1, 0}};
  a.beta = {{0, 0}};
  a.branch = {{0, 1}, {0, 1}};
  return a;
}

}  // namespace

TEST_CASE("action json round trip") {
  for (const ActionData& a : {hyperelliptic(), branched_two_torus()}) {
    auto j = action_to_json(a);
    CHECK(action_from_json(j) == a);
    // through text as well
    CHECK(parse_action(j.dump(2), "mem") == a);
  }
}

TEST_CASE("serialized bytes are stable") {
  ActionData a;
  a.p = 2;
  a.m = 1;
  a.g = 0;
  a.branch = {{1}, {1}};
  CHECK(action_to_json(a).dump() ==
        "{\"p\":2,\"m\":1,\"g\":0,\"alpha_images\":[],\"beta_images\":[],"
        "\"branch_images\":[[1],[1]]}");
  CHECK(action_to_json(a).dump() == action_to_json(a).dump());

  auto r1 = classify_report(hyperelliptic()).dump(2);
  auto r2 = classify_report(hyperelliptic()).dump(2);
  CHECK(r1 == r2);
}

TEST_CASE("parse errors name the offending field") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    CHECK_THROWS_WITH(parse_action(text, "t"),
                      Catch::Matchers::ContainsSubstring(needle));
  };
  expect_error("{\"p\":2,\"m\":1,\"g\":0}", "missing field: alpha_images");
  expect_error("{\"m\":1,\"g\":0}", "missing field: p");
  expect_error("{\"p\":4,\"m\":1,\"g\":0,\"alpha_images\":[],"
               "\"beta_images\":[],\"branch_images\":[]}",
               "not prime");
  expect_error("{\"p\":-2,\"m\":1,\"g\":0}", "field p must be a nonnegative integer");
  expect_error("{\"p\":2,\"m\":1,\"g\":0,\"alpha_images\":{},"
               "\"beta_images\":[],\"branch_images\":[]}",
               "field alpha_images must be an array of vectors");
  expect_error("{\"p\":2,\"m\":1,\"g\":1,\"alpha_images\":[[1,0]],"
               "\"beta_images\":[[1]],\"branch_images\":[]}",
               "alpha_images[0] has length 2, expected m = 1");
  expect_error("{\"p\":2,\"m\":1,\"g\":1,\"alpha_images\":[[2]],"
               "\"beta_images\":[[1]],\"branch_images\":[]}",
               "alpha_images[0][0] must be a residue in [0, 2)");
  expect_error("{\"p\":2,\"m\":1,\"g\":1,\"alpha_images\":[[1]],"
               "\"beta_images\":[],\"branch_images\":[]}",
               "beta_images has length 0, expected g = 1");
  expect_error("[1,2,3]", "must be a JSON object");
  expect_error("{not json", "t: ");
  CHECK_THROWS_WITH(load_action("/nonexistent/path.json"),
                    Catch::Matchers::ContainsSubstring("cannot open input file"));
}

TEST_CASE("invariant serialization") {
  SECTION("equivalent actions serialize identically") {
    ActionData a, b;
    a.p = b.p = 2;
    a.m = b.m = 2;
    a.g = b.g = 2;
    a.alpha = {{1, 0}, {0, 0}};
    a.beta = {{0, 1}, {0, 0}};
    b.alpha = {{0, 1}, {0, 0}};
    b.beta = {{1, 0}, {0, 0}};
    CHECK(strong_invariant_to_json(strong_invariant(a)).dump() ==
          strong_invariant_to_json(strong_invariant(b)).dump());
  }
  SECTION("report carries both invariants and the headline numbers") {
    auto rep = classify_report(hyperelliptic());
    CHECK(rep["p"] == 2);
    CHECK(rep["r"] == 6);
    CHECK(rep["total_genus"] == 2);
    CHECK(rep["strong"]["k"] == 0);
    CHECK(rep["strong"]["gfix_basis"] == ordered_json::parse("[[1]]"));
    CHECK(rep["weak"]["n"] == 1);
    CHECK(rep["weak"]["multiset"].size() == 6);
  }
  SECTION("text rendering is the same document flattened") {
    std::ostringstream os;
    render_text(classify_report(hyperelliptic()), os);
    std::string text = os.str();
    CHECK(text.find("p: 2\n") != std::string::npos);
    CHECK(text.find("total_genus: 2\n") != std::string::npos);
    CHECK(text.find("strong:\n") != std::string::npos);
    CHECK(text.find("  k: 0\n") != std::string::npos);
    CHECK(text.find("  multiset: [[1],[1],[1],[1],[1],[1]]\n") != std::string::npos);
  }
}
