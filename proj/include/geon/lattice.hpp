#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace geon::lattice {

/// Dense element index within one lattice. Indices from different lattices
/// must never be mixed.
using ElementId = int;

/// Triple with a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c). Both sides are kept so
/// reports can show the mismatch.
struct DistributivityViolation {
  ElementId a = 0, b = 0, c = 0;
  ElementId lhs = 0, rhs = 0;
};

/// Pair with a <= b but b != a ∨ (aᶜ ∧ b).
struct OrthomodularityViolation {
  ElementId a = 0, b = 0;
  ElementId rebuilt = 0;  // a ∨ (aᶜ ∧ b)
};

/// Atom p and element a with p ∧ a = 0 but a ∨ p not covering a.
struct CoveringViolation {
  ElementId atom = 0, element = 0;
};

/// A finite bounded lattice with an orthocomplementation, stored as an
/// explicit order relation. The constructor validates every structural
/// invariant (partial order, unique meets/joins, bounds, complement laws)
/// and rejects malformed input; all later operations assume validity.
///
/// Meet and join tables are filled in during validation, so lookups are
/// O(1) afterwards. Storage is O(n^2) and the property scans are O(n^3);
/// sizes beyond kMaxElements are rejected up front.
class FiniteOrtholattice {
 public:
  static constexpr int kMaxElements = 1 << 16;

  /// `leq` is row-major n*n with leq[a*n+b] nonzero iff a <= b.
  /// `complement` maps each element to its orthocomplement.
  /// Throws std::invalid_argument describing the first violated invariant.
  FiniteOrtholattice(int count, std::vector<std::uint8_t> leq,
                     std::vector<ElementId> complement);

  /// Builds the order as the reflexive-transitive closure of a covering
  /// relation (pairs are (lower, upper)), then validates as above.
  static FiniteOrtholattice from_covers(
      int count, const std::vector<std::pair<ElementId, ElementId>>& covers,
      std::vector<ElementId> complement);

  int size() const { return n_; }
  bool leq(ElementId a, ElementId b) const;
  bool lt(ElementId a, ElementId b) const { return a != b && leq(a, b); }
  ElementId bottom() const { return bottom_; }
  ElementId top() const { return top_; }

  ElementId meet(ElementId a, ElementId b) const;
  ElementId join(ElementId a, ElementId b) const;
  ElementId complement(ElementId a) const;

  /// True iff upper covers lower: lower < upper with nothing strictly between.
  bool covers(ElementId upper, ElementId lower) const;
  /// All covering pairs as (lower, upper), ordered lexicographically.
  std::vector<std::pair<ElementId, ElementId>> cover_pairs() const;
  /// Elements covering bottom, ascending.
  std::vector<ElementId> atoms() const;

  /// Exhaustive triple scan; empty report iff the lattice is distributive.
  /// Violations ordered lexicographically by (a, b, c).
  std::vector<DistributivityViolation> check_distributivity() const;
  /// Exhaustive scan over comparable pairs; empty iff orthomodular.
  std::vector<OrthomodularityViolation> check_orthomodularity() const;
  /// True iff every nonzero element dominates an atom.
  bool check_atomicity() const;
  /// Exhaustive scan of the covering property; empty report iff it holds.
  std::vector<CoveringViolation> check_covering() const;

 private:
  int index(ElementId a, ElementId b) const { return a * n_ + b; }
  void require_valid(ElementId a) const;
  void validate_order() const;
  void locate_bounds();
  void build_meet_join_tables();
  void validate_complement() const;

  int n_;
  std::vector<std::uint8_t> leq_;
  std::vector<ElementId> comp_;
  std::vector<ElementId> meet_;
  std::vector<ElementId> join_;
  ElementId bottom_ = 0;
  ElementId top_ = 0;
};

/// Boolean lattice of all subsets of an atom_count-element set
/// (2^atom_count elements, ids = subset bitmasks).
FiniteOrtholattice boolean_lattice(int atom_count);

/// MOn: 2n pairwise incomparable atoms in n complementary pairs, plus
/// bottom (id 0) and top (id 2n+1). Atom pair k occupies ids 2k+1, 2k+2.
FiniteOrtholattice mo_lattice(int pair_count);

/// The hexagon O6: 0 < a < b < 1 alongside 0 < bᶜ < aᶜ < 1. The smallest
/// ortholattice that fails orthomodularity. Ids: 0=bottom, 1=a, 2=b,
/// 3=bᶜ, 4=aᶜ, 5=top.
FiniteOrtholattice hexagon_lattice();

}  // namespace geon::lattice
