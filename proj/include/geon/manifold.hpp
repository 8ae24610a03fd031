#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geon/lattice.hpp"
#include "geon/lattice_io.hpp"

namespace geon::manifold {

/// One physically realizable measurement arrangement with its possible
/// outcomes. Distinct contexts impose conflicting boundary conditions and
/// are mutually exclusive by construction.
struct Context {
  std::string id;
  std::vector<std::string> outcomes;
};

/// One equivalence class of universes consistent with the state
/// preparation. A class is compatible with at most one (context, outcome)
/// pair; context/outcome are indices into the owning Universe, or -1 for
/// classes unconstrained by any measurement arrangement.
struct ManifoldClass {
  int id = 0;
  int context = -1;
  int outcome = -1;
  bool unconstrained() const { return context < 0; }
};

/// The full family of classes plus the contexts that carve it up.
struct Universe {
  std::vector<Context> contexts;
  std::vector<ManifoldClass> classes;

  /// Index of the context with this id, or -1.
  int context_index(const std::string& id) const;
  /// Index of the outcome within context ctx, or -1.
  int outcome_index(int ctx, const std::string& outcome) const;
  /// Sorted class ids compatible with context ctx (any outcome).
  std::vector<int> compatibility_extent(int ctx) const;
  /// Sorted class ids compatible with exactly (ctx, outcome).
  std::vector<int> outcome_extent(int ctx, int outcome) const;
};

/// Home marker for the two trivial propositions (always-false, always-true).
inline constexpr const char* kTrivialHome = "trivial";

/// A statement about the state preparation, identified with the set of
/// classes on which it holds. Non-trivial propositions belong to exactly
/// one context and their extent lies inside that context's compatibility
/// set.
struct Proposition {
  std::vector<int> extent;  // sorted class ids
  std::string home = kTrivialHome;
  bool trivial() const { return home == kTrivialHome; }
};

/// Minimal universe for the given contexts: one class per (context,
/// outcome) in declaration order, then `residual_classes` unconstrained
/// classes. Ids are dense and deterministic. Throws std::invalid_argument
/// on empty context lists, duplicate ids, or contexts with fewer than two
/// outcomes.
Universe build_universe(std::vector<Context> contexts, int residual_classes);

/// The proposition "measurement `context_id` would give `outcome`".
/// Throws std::invalid_argument for unknown context or outcome.
Proposition outcome_proposition(const Universe& u, const std::string& context_id,
                                const std::string& outcome);

/// Negation as realized by experiments: the union of the OTHER outcomes of
/// the same context, not the set complement within the universe. Trivial
/// propositions map to each other.
Proposition experimental_complement(const Universe& u, const Proposition& p);

/// generate_logic output: the lattice, plus the proposition each element
/// stands for.
struct GeneratedLogic {
  lattice::NamedLattice named;
  std::vector<Proposition> propositions;  // indexed by element id

  /// Element whose proposition has the same extent and home, or -1.
  lattice::ElementId element_of(const Proposition& p) const;
};

/// Closure of the outcome propositions under extent-intersection and
/// experimental complement, with the two trivial propositions adjoined.
/// Order is extent inclusion; joins are least upper bounds within the
/// generated set (not set unions). n binary contexts give a lattice
/// isomorphic to MOn.
GeneratedLogic generate_logic(const Universe& u);

/// The sublattice generated by one context's outcome propositions alone:
/// a Boolean algebra isomorphic to the power set of its outcomes.
GeneratedLogic boolean_restriction(const Universe& u,
                                   const std::string& context_id);

struct NonclassicalityClause {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct NonclassicalityReport {
  std::vector<NonclassicalityClause> clauses;
  bool all_pass() const;
  /// One structured record per clause, serialized as JSON.
  std::string to_text() const;
};

/// Three checks that the generated logic escapes classical set semantics:
/// (i) every context's compatibility set is a proper subset of the
/// universe, (ii) the distributive law fails on the first two contexts'
/// outcome propositions the way a(b+c) expansion would require, with
/// join(meet(a,b), meet(a,comp b)) = bottom while join(a, comp a) = top,
/// (iii) every single-context restriction is distributive.
NonclassicalityReport verify_nonclassicality(const Universe& u,
                                             const GeneratedLogic& logic);

/// Universe description file plus the optional per-context spin axis used
/// by the Hilbert-space bridge. axes[i] belongs to contexts[i].
struct UniverseConfig {
  Universe universe;
  std::vector<std::optional<std::array<double, 3>>> axes;
};

/// Parses {"contexts": [{"id", "outcomes", "axis"?}, ...],
/// "residual_classes": n}. residual_classes defaults to 1. Throws
/// std::runtime_error with the offending key on malformed input.
UniverseConfig parse_universe_config(const std::string& text,
                                     const std::string& origin);
UniverseConfig load_universe_config(const std::string& path);

}  // namespace geon::manifold
