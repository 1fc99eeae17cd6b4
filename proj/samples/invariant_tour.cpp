// Walks through the library on two famous small actions: the hyperelliptic
// involution on a genus-2 surface and the order-3 rotation of the torus with
// three fixed points.  Build and run; no arguments.

#include <iostream>

#include <zpmact/action.hpp>
#include <zpmact/json_io.hpp>
#include <zpmact/oracle.hpp>

using namespace zpmact;

static void show(const char* name, const ActionData& a) {
  std::cout << "== " << name << " ==\n";
  render_text(classify_report(a), std::cout);

  auto cov = build_cover(a);
  std::cout << "cover check: genus " << cover_genus(cov)
            << (is_connected(cov) ? ", connected" : ", DISCONNECTED") << "\n\n";
}

int main() {
  // Genus-0 quotient, six branch points, deck group Z/2: the hyperelliptic
  // involution in genus 2.
  ActionData hyperelliptic;
  hyperelliptic.p = 2;
  hyperelliptic.m = 1;
  hyperelliptic.g = 0;
  hyperelliptic.branch = {{1}, {1}, {1}, {1}, {1}, {1}};

  // Genus-0 quotient, three branch points, deck group Z/3: the rotation of
  // the hexagonal torus.
  ActionData torus_rotation;
  torus_rotation.p = 3;
  torus_rotation.m = 1;
  torus_rotation.g = 0;
  torus_rotation.branch = {{1}, {1}, {1}};

  show("hyperelliptic involution (total genus 2)", hyperelliptic);
  show("torus rotation of order 3", torus_rotation);

  // A pair that is weakly but not strongly equivalent: swap which handle
  // carries which basis vector of the deck group F_3^2.
  ActionData a, b;
  a.p = b.p = 3;
  a.m = b.m = 2;
  a.g = b.g = 2;
  a.alpha = {{1, 0}, {0, 0}};
  a.beta = {{0, 1}, {0, 0}};
  b.alpha = {{0, 1}, {0, 0}};
  b.beta = {{1, 0}, {0, 0}};

  std::cout << "swapped-handle pair: strong "
            << (strongly_equivalent(a, b) ? "equivalent" : "inequivalent")
            << ", weak "
            << (weakly_equivalent(a, b) ? "equivalent" : "inequivalent")
            << "\n\n";

  // Index the weak classes over genus 0 with at most four branch points.
  for (u32 p : {2u, 3u}) {
    auto classes = enumerate_weak_classes(p, 1, 0, 4);
    std::cout << "weak classes, p=" << p << " m=1 g=0 r<=4: "
              << classes.size() << "\n";
    for (const auto& w : classes)
      std::cout << "  " << weak_invariant_to_json(w).dump() << "\n";
  }
  return 0;
}
