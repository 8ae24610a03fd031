#include "geon/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace geon::lattice {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("ortholattice: " + what);
}

std::string pair_str(ElementId a, ElementId b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

FiniteOrtholattice::FiniteOrtholattice(int count, std::vector<std::uint8_t> leq,
                                       std::vector<ElementId> complement)
    : n_(count), leq_(std::move(leq)), comp_(std::move(complement)) {
  if (n_ <= 0) fail("element count must be positive");
  if (n_ > kMaxElements)
    fail("element count " + std::to_string(n_) + " exceeds cap " +
         std::to_string(kMaxElements));
  if (leq_.size() != static_cast<std::size_t>(n_) * n_)
    fail("order relation must have count*count entries");
  if (comp_.size() != static_cast<std::size_t>(n_))
    fail("complement map must have one entry per element");
  validate_order();
  locate_bounds();
  build_meet_join_tables();
  validate_complement();
}

FiniteOrtholattice FiniteOrtholattice::from_covers(
    int count, const std::vector<std::pair<ElementId, ElementId>>& covers,
    std::vector<ElementId> complement) {
  if (count <= 0) fail("element count must be positive");
  if (count > kMaxElements) fail("element count exceeds cap");
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(count) * count, 0);
  for (int a = 0; a < count; ++a) leq[static_cast<std::size_t>(a) * count + a] = 1;
  for (const auto& [lo, hi] : covers) {
    if (lo < 0 || lo >= count || hi < 0 || hi >= count)
      fail("cover " + pair_str(lo, hi) + " references unknown element");
    if (lo == hi) fail("cover " + pair_str(lo, hi) + " is reflexive");
    leq[static_cast<std::size_t>(lo) * count + hi] = 1;
  }
  // Floyd-Warshall style transitive closure; n is small enough.
  for (int k = 0; k < count; ++k)
    for (int a = 0; a < count; ++a) {
      if (!leq[static_cast<std::size_t>(a) * count + k]) continue;
      for (int b = 0; b < count; ++b)
        if (leq[static_cast<std::size_t>(k) * count + b])
          leq[static_cast<std::size_t>(a) * count + b] = 1;
    }
  return FiniteOrtholattice(count, std::move(leq), std::move(complement));
}

bool FiniteOrtholattice::leq(ElementId a, ElementId b) const {
  require_valid(a);
  require_valid(b);
  return leq_[index(a, b)] != 0;
}

ElementId FiniteOrtholattice::meet(ElementId a, ElementId b) const {
  require_valid(a);
  require_valid(b);
  return meet_[index(a, b)];
}

ElementId FiniteOrtholattice::join(ElementId a, ElementId b) const {
  require_valid(a);
  require_valid(b);
  return join_[index(a, b)];
}

ElementId FiniteOrtholattice::complement(ElementId a) const {
  require_valid(a);
  return comp_[a];
}

bool FiniteOrtholattice::covers(ElementId upper, ElementId lower) const {
  require_valid(upper);
  require_valid(lower);
  if (lower == upper || !leq_[index(lower, upper)]) return false;
  for (ElementId m = 0; m < n_; ++m)
    if (m != lower && m != upper && leq_[index(lower, m)] &&
        leq_[index(m, upper)])
      return false;
  return true;
}

std::vector<std::pair<ElementId, ElementId>> FiniteOrtholattice::cover_pairs()
    const {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (ElementId lo = 0; lo < n_; ++lo)
    for (ElementId hi = 0; hi < n_; ++hi)
      if (covers(hi, lo)) out.emplace_back(lo, hi);
  return out;
}

std::vector<ElementId> FiniteOrtholattice::atoms() const {
  std::vector<ElementId> out;
  for (ElementId a = 0; a < n_; ++a)
    if (covers(a, bottom_)) out.push_back(a);
  return out;
}

std::vector<DistributivityViolation> FiniteOrtholattice::check_distributivity()
    const {
  std::vector<DistributivityViolation> out;
  for (ElementId a = 0; a < n_; ++a)
    for (ElementId b = 0; b < n_; ++b)
      for (ElementId c = 0; c < n_; ++c) {
        ElementId lhs = meet_[index(a, join_[index(b, c)])];
        ElementId rhs = join_[index(meet_[index(a, b)], meet_[index(a, c)])];
        if (lhs != rhs) out.push_back({a, b, c, lhs, rhs});
      }
  return out;
}

std::vector<OrthomodularityViolation>
FiniteOrtholattice::check_orthomodularity() const {
  std::vector<OrthomodularityViolation> out;
  for (ElementId a = 0; a < n_; ++a)
    for (ElementId b = 0; b < n_; ++b) {
      if (!leq_[index(a, b)]) continue;
      ElementId rebuilt = join_[index(a, meet_[index(comp_[a], b)])];
      if (rebuilt != b) out.push_back({a, b, rebuilt});
    }
  return out;
}

bool FiniteOrtholattice::check_atomicity() const {
  const std::vector<ElementId> at = atoms();
  for (ElementId a = 0; a < n_; ++a) {
    if (a == bottom_) continue;
    bool dominated = false;
    for (ElementId p : at)
      if (leq_[index(p, a)]) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

std::vector<CoveringViolation> FiniteOrtholattice::check_covering() const {
  std::vector<CoveringViolation> out;
  for (ElementId p : atoms())
    for (ElementId a = 0; a < n_; ++a) {
      if (meet_[index(p, a)] != bottom_) continue;  // p under a, nothing new
      if (!covers(join_[index(p, a)], a)) out.push_back({p, a});
    }
  return out;
}

void FiniteOrtholattice::require_valid(ElementId a) const {
  if (a < 0 || a >= n_)
    fail("element id " + std::to_string(a) + " out of range");
}

void FiniteOrtholattice::validate_order() const {
  for (ElementId a = 0; a < n_; ++a)
    if (!leq_[index(a, a)])
      fail("order not reflexive at element " + std::to_string(a));
  for (ElementId a = 0; a < n_; ++a)
    for (ElementId b = 0; b < n_; ++b) {
      if (a != b && leq_[index(a, b)] && leq_[index(b, a)])
        fail("order not antisymmetric at " + pair_str(a, b));
      if (!leq_[index(a, b)]) continue;
      for (ElementId c = 0; c < n_; ++c)
        if (leq_[index(b, c)] && !leq_[index(a, c)])
          fail("order not transitive via " + std::to_string(a) + " <= " +
               std::to_string(b) + " <= " + std::to_string(c));
    }
}

void FiniteOrtholattice::locate_bounds() {
  ElementId bot = -1, top = -1;
  for (ElementId a = 0; a < n_; ++a) {
    bool is_bot = true, is_top = true;
    for (ElementId b = 0; b < n_; ++b) {
      if (!leq_[index(a, b)]) is_bot = false;
      if (!leq_[index(b, a)]) is_top = false;
    }
    if (is_bot) bot = a;
    if (is_top) top = a;
  }
  if (bot < 0) fail("no bottom element");
  if (top < 0) fail("no top element");
  bottom_ = bot;
  top_ = top;
}

void FiniteOrtholattice::build_meet_join_tables() {
  meet_.assign(static_cast<std::size_t>(n_) * n_, -1);
  join_.assign(static_cast<std::size_t>(n_) * n_, -1);
  for (ElementId a = 0; a < n_; ++a)
    for (ElementId b = a; b < n_; ++b) {
      // Greatest lower bound: the unique maximal common lower bound.
      ElementId glb = -1;
      for (ElementId m = 0; m < n_; ++m) {
        if (!leq_[index(m, a)] || !leq_[index(m, b)]) continue;
        if (glb < 0 || leq_[index(glb, m)]) glb = m;
      }
      for (ElementId m = 0; m < n_; ++m)
        if (leq_[index(m, a)] && leq_[index(m, b)] && !leq_[index(m, glb)])
          fail("elements " + pair_str(a, b) + " have no meet");
      ElementId lub = -1;
      for (ElementId j = 0; j < n_; ++j) {
        if (!leq_[index(a, j)] || !leq_[index(b, j)]) continue;
        if (lub < 0 || leq_[index(j, lub)]) lub = j;
      }
      for (ElementId j = 0; j < n_; ++j)
        if (leq_[index(a, j)] && leq_[index(b, j)] && !leq_[index(lub, j)])
          fail("elements " + pair_str(a, b) + " have no join");
      meet_[index(a, b)] = meet_[index(b, a)] = glb;
      join_[index(a, b)] = join_[index(b, a)] = lub;
    }
}

void FiniteOrtholattice::validate_complement() const {
  for (ElementId a = 0; a < n_; ++a) {
    ElementId ac = comp_[a];
    if (ac < 0 || ac >= n_)
      fail("complement of " + std::to_string(a) + " out of range");
    if (comp_[ac] != a)
      fail("complement not involutive at element " + std::to_string(a));
    if (meet_[index(a, ac)] != bottom_)
      fail("element " + std::to_string(a) + " meets its complement above bottom");
    if (join_[index(a, ac)] != top_)
      fail("element " + std::to_string(a) + " joins its complement below top");
  }
  for (ElementId a = 0; a < n_; ++a)
    for (ElementId b = 0; b < n_; ++b)
      if (leq_[index(a, b)] && !leq_[index(comp_[b], comp_[a])])
        fail("complement not order-reversing at " + pair_str(a, b));
}

FiniteOrtholattice boolean_lattice(int atom_count) {
  if (atom_count < 0 || atom_count > 16)
    fail("boolean lattice supports 0..16 atoms");
  const int n = 1 << atom_count;
  const int full = n - 1;
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  std::vector<ElementId> comp(n);
  for (int a = 0; a < n; ++a) {
    comp[a] = full & ~a;
    for (int b = 0; b < n; ++b)
      if ((a & b) == a) leq[static_cast<std::size_t>(a) * n + b] = 1;
  }
  return FiniteOrtholattice(n, std::move(leq), std::move(comp));
}

FiniteOrtholattice mo_lattice(int pair_count) {
  if (pair_count < 1) fail("mo lattice needs at least one atom pair");
  const int n = 2 * pair_count + 2;
  const ElementId top = n - 1;
  std::vector<std::pair<ElementId, ElementId>> covers;
  std::vector<ElementId> comp(n);
  comp[0] = top;
  comp[top] = 0;
  for (int k = 0; k < pair_count; ++k) {
    ElementId plus = 2 * k + 1, minus = 2 * k + 2;
    covers.emplace_back(0, plus);
    covers.emplace_back(0, minus);
    covers.emplace_back(plus, top);
    covers.emplace_back(minus, top);
    comp[plus] = minus;
    comp[minus] = plus;
  }
  return FiniteOrtholattice::from_covers(n, covers, std::move(comp));
}

FiniteOrtholattice hexagon_lattice() {
  // 0 < 1 < 2 < 5 and 0 < 3 < 4 < 5, complement swapping the chains.
  std::vector<std::pair<ElementId, ElementId>> covers = {
      {0, 1}, {1, 2}, {2, 5}, {0, 3}, {3, 4}, {4, 5}};
  return FiniteOrtholattice::from_covers(6, covers, {5, 4, 3, 2, 1, 0});
}

}  // namespace geon::lattice
