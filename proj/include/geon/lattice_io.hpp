#pragma once

#include <string>
#include <vector>

#include "geon/lattice.hpp"

namespace geon::lattice {

/// A lattice together with the element names used in interchange files.
/// Names are unique and indexed by element id.
struct NamedLattice {
  FiniteOrtholattice lattice;
  std::vector<std::string> names;

  const std::string& name_of(ElementId id) const;
  /// Index of `name`, or -1 when absent.
  ElementId id_of(const std::string& name) const;
};

/// Reads the JSON interchange format:
///   elements: list of unique element names (defines the id order)
///   covers: list of [lower, upper] name pairs
///   complement: object mapping each name to its orthocomplement's name
///   top, bottom: names of the bounds
/// The declared bounds are cross-checked against the order; any structural
/// defect raises std::runtime_error with the offending key or element.
NamedLattice read_lattice_file(const std::string& path);
NamedLattice parse_lattice_text(const std::string& text,
                                const std::string& origin);

/// Writes the same format, deterministically ordered (elements by id,
/// covers lexicographic), so identical lattices produce identical bytes.
std::string to_interchange_text(const NamedLattice& nl);
void write_lattice_file(const std::string& path, const NamedLattice& nl);

/// Hasse diagram in DOT format: one edge per covering pair (drawn upward),
/// plus dashed non-constraining edges between complement pairs.
std::string to_dot(const NamedLattice& nl, const std::string& graph_name);

}  // namespace geon::lattice
