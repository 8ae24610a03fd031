#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geon/lattice.hpp"
#include "geon/lattice_io.hpp"

using namespace geon::lattice;

namespace {

// Order-only oracle for meets and joins: rederives the bounds from leq()
// alone, with none of the table-building shortcuts the class uses. A glb
// exists iff the set of common lower bounds has a unique maximal element.
ElementId oracle_meet(const FiniteOrtholattice& L, ElementId a, ElementId b) {
  std::vector<ElementId> lower;
  for (ElementId x = 0; x < L.size(); ++x)
    if (L.leq(x, a) && L.leq(x, b)) lower.push_back(x);
  std::vector<ElementId> maximal;
  for (ElementId x : lower) {
    bool dominated = false;
    for (ElementId y : lower)
      if (y != x && L.leq(x, y)) dominated = true;
    if (!dominated) maximal.push_back(x);
  }
  REQUIRE(maximal.size() == 1);
  return maximal.front();
}

ElementId oracle_join(const FiniteOrtholattice& L, ElementId a, ElementId b) {
  std::vector<ElementId> upper;
  for (ElementId x = 0; x < L.size(); ++x)
    if (L.leq(a, x) && L.leq(b, x)) upper.push_back(x);
  std::vector<ElementId> minimal;
  for (ElementId x : upper) {
    bool dominates = false;
    for (ElementId y : upper)
      if (y != x && L.leq(y, x)) dominates = true;
    if (!dominates) minimal.push_back(x);
  }
  REQUIRE(minimal.size() == 1);
  return minimal.front();
}

// The small zoo every structural test runs over.
std::vector<FiniteOrtholattice> zoo() {
  std::vector<FiniteOrtholattice> out;
  for (int k = 1; k <= 4; ++k) out.push_back(boolean_lattice(k));
  for (int k = 1; k <= 4; ++k) out.push_back(mo_lattice(k));
  out.push_back(hexagon_lattice());
  return out;
}

}  // namespace

TEST_CASE("meet and join tables agree with the order-only oracle") {
  for (const auto& L : zoo())
    for (ElementId a = 0; a < L.size(); ++a)
      for (ElementId b = 0; b < L.size(); ++b) {
        CHECK(L.meet(a, b) == oracle_meet(L, a, b));
        CHECK(L.join(a, b) == oracle_join(L, a, b));
      }
}

TEST_CASE("lattice identities hold across the zoo") {
  for (const auto& L : zoo()) {
    for (ElementId a = 0; a < L.size(); ++a) {
      CHECK(L.meet(a, a) == a);
      CHECK(L.join(a, a) == a);
      CHECK(L.meet(a, L.top()) == a);
      CHECK(L.join(a, L.bottom()) == a);
      CHECK(L.complement(L.complement(a)) == a);
      CHECK(L.meet(a, L.complement(a)) == L.bottom());
      CHECK(L.join(a, L.complement(a)) == L.top());
      for (ElementId b = 0; b < L.size(); ++b) {
        CHECK(L.meet(a, b) == L.meet(b, a));
        CHECK(L.join(a, b) == L.join(b, a));
        // Absorption ties the two operations together.
        CHECK(L.meet(a, L.join(a, b)) == a);
        CHECK(L.join(a, L.meet(a, b)) == a);
        // De Morgan follows from the complement reversing the order.
        CHECK(L.complement(L.meet(a, b)) ==
              L.join(L.complement(a), L.complement(b)));
        CHECK(L.complement(L.join(a, b)) ==
              L.meet(L.complement(a), L.complement(b)));
        // leq must be exactly "meet gives back the smaller side".
        CHECK(L.leq(a, b) == (L.meet(a, b) == a));
      }
    }
  }
}

TEST_CASE("associativity on the zoo") {
  for (const auto& L : zoo())
    for (ElementId a = 0; a < L.size(); ++a)
      for (ElementId b = 0; b < L.size(); ++b)
        for (ElementId c = 0; c < L.size(); ++c) {
          CHECK(L.meet(L.meet(a, b), c) == L.meet(a, L.meet(b, c)));
          CHECK(L.join(L.join(a, b), c) == L.join(a, L.join(b, c)));
        }
}

TEST_CASE("boolean lattices satisfy every checked property") {
  for (int k = 0; k <= 4; ++k) {
    FiniteOrtholattice L = boolean_lattice(k);
    CHECK(L.size() == (1 << k));
    CHECK(L.check_distributivity().empty());
    CHECK(L.check_orthomodularity().empty());
    CHECK(L.check_atomicity());
    CHECK(L.check_covering().empty());
    // Ids are subset bitmasks, so the operations must be bit operations.
    for (ElementId a = 0; a < L.size(); ++a)
      for (ElementId b = 0; b < L.size(); ++b) {
        CHECK(L.meet(a, b) == (a & b));
        CHECK(L.join(a, b) == (a | b));
      }
    CHECK(static_cast<int>(L.atoms().size()) == k);
  }
}

TEST_CASE("MO2 fails distributivity in exactly the predicted triples") {
  FiniteOrtholattice L = mo_lattice(2);
  CHECK(L.size() == 6);
  std::vector<ElementId> atoms = L.atoms();
  CHECK(atoms == std::vector<ElementId>{1, 2, 3, 4});

  // Counting argument fixing the expected report: any two distinct atoms
  // join to top, and distinct atoms meet to bottom. So a ∧ (b ∨ c) = a
  // whenever b, c are distinct atoms, while (a ∧ b) ∨ (a ∧ c) collapses to
  // bottom whenever a is an atom outside {b, c}. Every violating triple is
  // of that shape: 4 choices of a times 3*2 ordered pairs (b, c) = 24.
  auto viol = L.check_distributivity();
  CHECK(viol.size() == 24);
  std::set<std::array<ElementId, 3>> seen;
  for (const auto& v : viol) {
    CHECK(std::count(atoms.begin(), atoms.end(), v.a) == 1);
    CHECK(std::count(atoms.begin(), atoms.end(), v.b) == 1);
    CHECK(std::count(atoms.begin(), atoms.end(), v.c) == 1);
    CHECK(v.a != v.b);
    CHECK(v.a != v.c);
    CHECK(v.b != v.c);
    CHECK(v.lhs == v.a);
    CHECK(v.rhs == L.bottom());
    seen.insert({v.a, v.b, v.c});
  }
  CHECK(seen.size() == 24);

  // The triple driving the two-arrangement argument is among them:
  // a = first-pair plus, b / c = the second pair.
  CHECK(seen.count({1, 3, 4}) == 1);

  // Yet MO2 keeps the quantum-logic properties.
  CHECK(L.check_orthomodularity().empty());
  CHECK(L.check_atomicity());
  CHECK(L.check_covering().empty());
}

TEST_CASE("MOn families scale the same way") {
  for (int n = 1; n <= 4; ++n) {
    FiniteOrtholattice L = mo_lattice(n);
    CHECK(L.size() == 2 * n + 2);
    CHECK(static_cast<int>(L.atoms().size()) == 2 * n);
    CHECK(L.check_orthomodularity().empty());
    CHECK(L.check_atomicity());
    CHECK(L.check_covering().empty());
    // Same counting argument as for MO2: 2n * (2n-1) * (2n-2) triples.
    int expected = 2 * n * (2 * n - 1) * (2 * n - 2);
    CHECK(static_cast<int>(L.check_distributivity().size()) == expected);
    // MO1 is the 2x2 Boolean square in disguise, so only n >= 2 violate.
    if (n == 1) CHECK(expected == 0);
  }
}

TEST_CASE("the hexagon is the orthomodularity counterexample") {
  FiniteOrtholattice L = hexagon_lattice();
  auto viol = L.check_orthomodularity();
  REQUIRE(viol.size() == 2);
  // a < b with b != a ∨ (aᶜ ∧ b): the two mid-chain pairs, symmetric
  // under the complement.
  CHECK(viol[0].a == 1);
  CHECK(viol[0].b == 2);
  CHECK(viol[0].rebuilt == 1);
  CHECK(viol[1].a == 3);
  CHECK(viol[1].b == 4);
  CHECK(viol[1].rebuilt == 3);
  CHECK(L.check_atomicity());
  // The covering law also fails here, in the mirrored atom pair.
  auto cov = L.check_covering();
  REQUIRE(cov.size() == 2);
  CHECK(cov[0].atom == 1);
  CHECK(cov[0].element == 3);
  CHECK(cov[1].atom == 3);
  CHECK(cov[1].element == 1);
  CHECK(L.check_distributivity().size() == 8);
}

TEST_CASE("cover pairs and atoms are consistent with the order") {
  for (const auto& L : zoo()) {
    auto pairs = L.cover_pairs();
    CHECK(std::is_sorted(pairs.begin(), pairs.end()));
    for (auto [lo, hi] : pairs) {
      CHECK(L.lt(lo, hi));
      for (ElementId m = 0; m < L.size(); ++m)
        CHECK(!(L.lt(lo, m) && L.lt(m, hi)));
    }
    for (ElementId a : L.atoms()) CHECK(L.covers(a, L.bottom()));
  }
}

TEST_CASE("from_covers reproduces the directly built MO2") {
  FiniteOrtholattice direct = mo_lattice(2);
  std::vector<std::pair<ElementId, ElementId>> covers = {
      {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}};
  FiniteOrtholattice rebuilt =
      FiniteOrtholattice::from_covers(6, covers, {5, 2, 1, 4, 3, 0});
  REQUIRE(rebuilt.size() == direct.size());
  for (ElementId a = 0; a < direct.size(); ++a) {
    CHECK(rebuilt.complement(a) == direct.complement(a));
    for (ElementId b = 0; b < direct.size(); ++b) {
      CHECK(rebuilt.leq(a, b) == direct.leq(a, b));
      CHECK(rebuilt.meet(a, b) == direct.meet(a, b));
      CHECK(rebuilt.join(a, b) == direct.join(a, b));
    }
  }
}

TEST_CASE("malformed structures are rejected up front") {
  // Cyclic covers break antisymmetry.
  CHECK_THROWS_AS(FiniteOrtholattice::from_covers(3, {{0, 1}, {1, 2}, {2, 1}},
                                                  {2, 1, 0}),
                  std::invalid_argument);

  // Two maximal elements: no top.
  {
    std::vector<std::uint8_t> leq = {1, 1, 1,  //
                                     0, 1, 0,  //
                                     0, 0, 1};
    CHECK_THROWS_AS(FiniteOrtholattice(3, std::move(leq), {0, 1, 2}),
                    std::invalid_argument);
  }

  // 0 < a,b < x,y < 1: the pair {a, b} has two minimal upper bounds, so
  // joins are not unique and this poset is not a lattice.
  {
    std::vector<std::pair<ElementId, ElementId>> covers = {
        {0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 5}, {4, 5}};
    CHECK_THROWS_AS(
        FiniteOrtholattice::from_covers(6, covers, {5, 4, 3, 2, 1, 0}),
        std::invalid_argument);
  }

  // Complement that is not an involution.
  CHECK_THROWS_AS(FiniteOrtholattice::from_covers(4, {{0, 1}, {0, 2}, {1, 3},
                                                      {2, 3}},
                                                  {3, 1, 2, 0}),
                  std::invalid_argument);

  // Complement failing a ∧ aᶜ = 0 (fixed point on a chain midpoint).
  CHECK_THROWS_AS(FiniteOrtholattice::from_covers(3, {{0, 1}, {1, 2}},
                                                  {2, 1, 0}),
                  std::invalid_argument);

  // Size / id plumbing.
  CHECK_THROWS_AS(FiniteOrtholattice(0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteOrtholattice(2, {1, 0, 0, 1}, {1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiniteOrtholattice(2, {1, 0, 1}, {1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(boolean_lattice(17), std::invalid_argument);
  CHECK_THROWS_AS(boolean_lattice(-1), std::invalid_argument);
  CHECK_THROWS_AS(mo_lattice(0), std::invalid_argument);
}

TEST_CASE("interchange text round-trips byte for byte") {
  FiniteOrtholattice L = mo_lattice(2);
  NamedLattice nl{std::move(L), {"0", "x+", "x-", "y+", "y-", "I"}};
  std::string text = to_interchange_text(nl);
  NamedLattice back = parse_lattice_text(text, "round-trip");
  CHECK(back.names == nl.names);
  CHECK(to_interchange_text(back) == text);
  for (ElementId a = 0; a < nl.lattice.size(); ++a)
    for (ElementId b = 0; b < nl.lattice.size(); ++b)
      CHECK(back.lattice.leq(a, b) == nl.lattice.leq(a, b));
}

TEST_CASE("interchange parser reports offending input") {
  // Valid baseline to mutate.
  const char* ok = R"({
    "elements": ["0", "a", "I"],
    "covers": [["0", "a"], ["a", "I"]],
    "complement": {"0": "I", "a": "a", "I": "0"},
    "top": "I", "bottom": "0"
  })";
  // a ∧ aᶜ = a != 0, so even this small file must fail validation.
  CHECK_THROWS(parse_lattice_text(ok, "chain"));

  CHECK_THROWS(parse_lattice_text("not json", "bad"));
  CHECK_THROWS(parse_lattice_text("{}", "empty"));
  CHECK_THROWS(parse_lattice_text(R"({
    "elements": ["0", "I", "I"],
    "covers": [["0", "I"]],
    "complement": {"0": "I", "I": "0"},
    "top": "I", "bottom": "0"
  })", "dup-names"));
  CHECK_THROWS(parse_lattice_text(R"({
    "elements": ["0", "I"],
    "covers": [["0", "missing"]],
    "complement": {"0": "I", "I": "0"},
    "top": "I", "bottom": "0"
  })", "unknown-name"));
  CHECK_THROWS(parse_lattice_text(R"({
    "elements": ["0", "I"],
    "covers": [["0", "I"]],
    "complement": {"0": "I", "I": "0"},
    "top": "0", "bottom": "I"
  })", "swapped-bounds"));
}

TEST_CASE("dot export names every element and cover") {
  FiniteOrtholattice L = hexagon_lattice();
  NamedLattice nl{std::move(L), {"0", "a", "b", "c", "d", "I"}};
  std::string dot = to_dot(nl, "hex");
  CHECK(dot.find("digraph \"hex\"") != std::string::npos);
  for (const std::string& name : nl.names)
    CHECK(dot.find("\"" + name + "\"") != std::string::npos);
  CHECK(dot.find("\"a\" -> \"b\"") != std::string::npos);
  CHECK(dot.find("\"0\" -> \"I\"") != std::string::npos);  // complement edge
  CHECK(dot.find("style=dashed") != std::string::npos);
}
