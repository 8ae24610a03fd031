#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "geon/lattice.hpp"
#include "geon/lattice_io.hpp"

namespace geon::hilbert {

/// A subspace of a finite-dimensional complex inner-product space, stored
/// as a matrix whose columns form an orthonormal basis (zero columns for
/// the zero subspace). The constructor rejects bases that are not
/// orthonormal to 1e-12.
class Subspace {
 public:
  Subspace(int ambient_dim, Eigen::MatrixXcd basis);

  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);
  /// Orthonormalizes the columns of `vectors` (SVD, singular values below
  /// 1e-10 dropped) and spans the result.
  static Subspace span_of(int ambient_dim, const Eigen::MatrixXcd& vectors);

  int ambient_dim() const { return dim_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXcd& basis() const { return basis_; }
  /// The orthogonal projector onto this subspace (basis independent).
  Eigen::MatrixXcd projector() const;

  /// Equality of subspaces, not bases: projectors within 1e-10.
  bool same_as(const Subspace& other) const;
  /// True iff this subspace lies inside `other`.
  bool contained_in(const Subspace& other) const;

 private:
  int dim_;
  Eigen::MatrixXcd basis_;
};

/// The ± eigenspace of the spin operator along `axis` (unit 3-vector) in 2
/// complex dimensions. Global phase is fixed by making the first nonzero
/// component real positive. Throws std::invalid_argument for non-unit axes
/// or sign not in {+1, -1}.
Subspace spin_eigenspace(const Eigen::Vector3d& axis, int sign);

/// Standard lattice operations on subspaces: intersection via the common
/// null-space of [A, -B], closed span via orthonormalization, orthogonal
/// complement via full SVD. All throw on ambient dimension mismatch.
Subspace meet_subspace(const Subspace& a, const Subspace& b);
Subspace join_subspace(const Subspace& a, const Subspace& b);
Subspace ortho_subspace(const Subspace& a);

/// A finite set of subspaces closed under meet, join, and orthocomplement,
/// together with the ortholattice it induces under inclusion. Element ids
/// index both `elements` and the named lattice.
struct SubspaceLattice {
  int ambient_dim;
  std::vector<Subspace> elements;
  lattice::NamedLattice named;
};

/// One ± eigenspace pair per axis, plus the zero and full subspaces.
/// Labels name the axes in lattice exports (default s0, s1, ...). Axes
/// must be pairwise non-collinear: an antiparallel axis would duplicate an
/// existing eigenspace pair. Verifies closure of the element set before
/// inducing the lattice.
SubspaceLattice build_spin_lattice(const std::vector<Eigen::Vector3d>& axes,
                                   std::vector<std::string> labels = {});

/// Order- and complement-preserving bijection from L1 ids to L2 ids, found
/// by backtracking over element assignments, or nullopt when provably
/// absent.
std::optional<std::vector<lattice::ElementId>> check_isomorphic(
    const lattice::FiniteOrtholattice& L1, const lattice::FiniteOrtholattice& L2);

/// Basis vectors as "(re, im)" rows, one line per ambient dimension, for
/// the subspace dump files.
std::string format_subspace(const Subspace& s);

}  // namespace geon::hilbert
