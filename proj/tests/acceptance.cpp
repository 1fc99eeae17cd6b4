/* Acceptance harness.  Nine criteria, one line each; every criterion has a
 * wall-time budget enforced here, so a pass means both "correct" and "fast
 * enough".  Exit status is the number of failed criteria. */

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <zpmact/selfcheck.hpp>

using namespace zpmact;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(ZPMACT_CLI_PATH) + " " + args + " 2>&1";
  CliRun res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

Verdict from_outcome(const CheckOutcome& out) {
  return {out.ok, out.detail};
}

Verdict free_class_counts_via_cli() {
  struct Case {
    const char* args;
    const char* expect;
  } cases[] = {
      {"enumerate --m 2 --g 2 --r-max 0 --count-only", "2\n"},
      {"enumerate --m 1 --g 1 --count-only", "1\n"},
      {"enumerate --m 3 --g 1 --count-only", "0\n"},
  };
  for (const auto& c : cases) {
    CliRun res = run_cli(c.args);
    if (res.code != 0 || res.out != c.expect)
      return {false, std::string("`") + c.args + "` printed \"" + res.out +
                         "\" (exit " + std::to_string(res.code) +
                         "), expected \"" + c.expect + "\""};
  }
  return {true, "counts 2, 1, 0"};
}

Verdict surjectivity_cases() {
  Limits lim;
  struct Case {
    u32 p;
    std::size_t g;
    u64 order;
  } cases[] = {{2, 1, 6}, {3, 1, 24}, {2, 2, 720}};
  std::ostringstream detail;
  for (const auto& c : cases) {
    SurjectivityReport rep = verify_reduction_surjectivity(c.p, c.g, lim);
    if (!rep.ok || rep.generated_order != c.order || rep.full_order != c.order)
      return {false, "(p=" + std::to_string(c.p) + ", g=" +
                         std::to_string(c.g) + "): generated " +
                         std::to_string(rep.generated_order) + ", full " +
                         std::to_string(rep.full_order) + ", expected " +
                         std::to_string(c.order)};
    detail << (detail.tellp() > 0 ? ", " : "") << rep.full_order;
  }
  return {true, "orders " + detail.str()};
}

struct GridCase {
  u32 p;
  std::size_t m, g, r_max;
  std::size_t strong_classes;
  std::size_t weak_classes;
};

// expectations confirmed against the orbit oracle before being frozen here
constexpr GridCase kGrid[] = {
    {2, 1, 1, 0, 1, 1},
    {2, 2, 2, 0, 2, 2},
    {2, 1, 0, 4, 2, 2},
    {3, 1, 0, 3, 3, 2},
    {2, 2, 1, 2, 4, 2},
};

Verdict oracle_grid(bool strong) {
  std::ostringstream detail;
  for (const GridCase& c : kGrid) {
    CheckOutcome out =
        strong ? checks::strong_oracle(c.p, c.m, c.g, c.r_max, c.strong_classes)
               : checks::weak_oracle(c.p, c.m, c.g, c.r_max, c.weak_classes);
    if (!out.ok) return {false, out.name + ": " + out.detail};
    detail << (detail.tellp() > 0 ? ", " : "")
           << (strong ? c.strong_classes : c.weak_classes);
  }
  return {true, "class counts " + detail.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* what;
    double budget;
    std::function<Verdict()> run;
  };

  const std::vector<Criterion> criteria = {
      {"free weak-class counts through the CLI", 1.0,
       free_class_counts_via_cli},
      {"integral-to-mod-p surjectivity at (2,1), (3,1), (2,2)", 30.0,
       surjectivity_cases},
      {"strong invariants match the orbit oracle on the desk grid", 300.0,
       [] { return oracle_grid(true); }},
      {"weak invariants match the orbit oracle and the class table", 300.0,
       [] { return oracle_grid(false); }},
      {"adapted bases on 200 random alternating forms", 5.0,
       [] { return from_outcome(checks::adapted_basis_suite(200)); }},
      {"isometry extension on 100 random partial maps", 30.0,
       [] { return from_outcome(checks::isometry_extension_suite(100, 3)); }},
      {"total genus equals cover genus on 100 random actions", 30.0,
       [] { return from_outcome(checks::riemann_hurwitz_suite(100)); }},
      {"strong invariant constant under 100 moves per fixture", 30.0,
       [] { return from_outcome(checks::invariance_suite(100)); }},
      {"weak invariant of the witness equals the input triple", 60.0,
       [] { return from_outcome(checks::constructor_roundtrip(3, 3, 4)); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool in_budget = secs <= c.budget;
    bool pass = v.ok && in_budget;
    if (!pass) ++failures;

    std::ostringstream line;
    line << "[" << (i + 1) << "/" << criteria.size() << "] "
         << (pass ? "PASS" : "FAIL") << "  " << c.what;
    if (!v.detail.empty()) line << ": " << v.detail;
    line << "  [" << std::fixed << std::setprecision(2) << secs << "s";
    if (in_budget)
      line << " < " << std::setprecision(0) << c.budget << "s]";
    else
      line << ", OVER budget " << std::setprecision(0) << c.budget << "s]";
    std::cout << line.str() << std::endl;
  }

  std::cout << (failures == 0 ? "acceptance: all criteria pass"
                              : "acceptance: " + std::to_string(failures) +
                                    " criteria FAILED")
            << std::endl;
  return failures;
}
