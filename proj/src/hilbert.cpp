#include "geon/hilbert.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geon/numfmt.hpp"

namespace geon::hilbert {

namespace {

constexpr double kOrthoTol = 1e-12;   // basis orthonormality
constexpr double kRankTol = 1e-10;    // singular value threshold

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("subspace: " + what);
}

// Multiplies each column by a unit phase making its first component of
// magnitude above kRankTol real positive, for reproducible dumps.
Eigen::MatrixXcd fix_phase(Eigen::MatrixXcd m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::complex<double> v = m(r, c);
      if (std::abs(v) > kRankTol) {
        m.col(c) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  return m;
}

}  // namespace

Subspace::Subspace(int ambient_dim, Eigen::MatrixXcd basis)
    : dim_(ambient_dim), basis_(std::move(basis)) {
  if (dim_ <= 0) fail("ambient dimension must be positive");
  if (basis_.rows() != dim_)
    fail("basis vectors must have ambient_dim components");
  if (basis_.cols() > dim_) fail("rank exceeds ambient dimension");
  if (basis_.cols() > 0) {
    Eigen::MatrixXcd gram = basis_.adjoint() * basis_;
    gram -= Eigen::MatrixXcd::Identity(basis_.cols(), basis_.cols());
    if (gram.cwiseAbs().maxCoeff() > kOrthoTol)
      fail("basis is not orthonormal");
  }
}

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(ambient_dim, Eigen::MatrixXcd(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim,
                  Eigen::MatrixXcd::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span_of(int ambient_dim, const Eigen::MatrixXcd& vectors) {
  if (vectors.rows() != ambient_dim)
    fail("spanning vectors must have ambient_dim components");
  if (vectors.cols() == 0) return zero(ambient_dim);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankTol) ++rank;
  return Subspace(ambient_dim, fix_phase(svd.matrixU().leftCols(rank)));
}

Eigen::MatrixXcd Subspace::projector() const {
  if (rank() == 0) return Eigen::MatrixXcd::Zero(dim_, dim_);
  return basis_ * basis_.adjoint();
}

bool Subspace::same_as(const Subspace& other) const {
  if (dim_ != other.dim_) return false;
  return (projector() - other.projector()).cwiseAbs().maxCoeff() <= kRankTol;
}

bool Subspace::contained_in(const Subspace& other) const {
  if (dim_ != other.dim_) return false;
  if (rank() == 0) return true;
  Eigen::MatrixXcd p = projector();
  return (other.projector() * p - p).cwiseAbs().maxCoeff() <= kRankTol;
}

Subspace spin_eigenspace(const Eigen::Vector3d& axis, int sign) {
  if (std::abs(axis.norm() - 1.0) > 1e-9)
    fail("spin axis must be a unit vector");
  if (sign != 1 && sign != -1) fail("spin sign must be +1 or -1");
  // Half-angle form of the +/- eigenvectors of the spin operator along
  // (sin t cos p, sin t sin p, cos t).
  double theta = std::acos(std::clamp(axis.z(), -1.0, 1.0));
  double phi = std::atan2(axis.y(), axis.x());
  std::complex<double> eip(std::cos(phi), std::sin(phi));
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::MatrixXcd v(2, 1);
  if (sign > 0)
    v << std::complex<double>(c, 0), eip * s;
  else
    v << std::complex<double>(-s, 0), eip * c;
  return Subspace(2, fix_phase(std::move(v)));
}

Subspace meet_subspace(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) fail("ambient dimension mismatch");
  const int d = a.ambient_dim();
  if (a.rank() == 0 || b.rank() == 0) return Subspace::zero(d);
  if (a.rank() == d) return b;
  if (b.rank() == d) return a;
  // x lies in both ranges iff x = A u = B v for some (u, v), i.e. (u; v)
  // is in the null space of [A, -B].
  Eigen::MatrixXcd stacked(d, a.rank() + b.rank());
  stacked << a.basis(), -b.basis();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeFullV);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankTol) ++rank;
  const Eigen::Index nullity = stacked.cols() - rank;
  if (nullity == 0) return Subspace::zero(d);
  Eigen::MatrixXcd u_part =
      svd.matrixV().rightCols(nullity).topRows(a.rank());
  return Subspace::span_of(d, a.basis() * u_part);
}

Subspace join_subspace(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) fail("ambient dimension mismatch");
  Eigen::MatrixXcd stacked(a.ambient_dim(), a.rank() + b.rank());
  stacked << a.basis(), b.basis();
  return Subspace::span_of(a.ambient_dim(), stacked);
}

Subspace ortho_subspace(const Subspace& a) {
  const int d = a.ambient_dim();
  if (a.rank() == 0) return Subspace::full(d);
  if (a.rank() == d) return Subspace::zero(d);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.basis(), Eigen::ComputeFullU);
  return Subspace(d, fix_phase(svd.matrixU().rightCols(d - a.rank())));
}

SubspaceLattice build_spin_lattice(const std::vector<Eigen::Vector3d>& axes,
                                   std::vector<std::string> labels) {
  if (axes.empty()) fail("at least one spin axis is required");
  if (labels.empty())
    for (std::size_t i = 0; i < axes.size(); ++i)
      labels.push_back("s" + std::to_string(i));
  if (labels.size() != axes.size())
    fail("one label per axis is required");
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (std::abs(axes[i].dot(axes[j])) > 1.0 - 1e-9)
        fail("axes '" + labels[i] + "' and '" + labels[j] +
             "' are collinear and would define the same arrangement");

  std::vector<Subspace> elements;
  std::vector<std::string> names;
  elements.push_back(Subspace::zero(2));
  names.push_back("0");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    elements.push_back(spin_eigenspace(axes[i], +1));
    names.push_back(labels[i] + "+");
    elements.push_back(spin_eigenspace(axes[i], -1));
    names.push_back(labels[i] + "-");
  }
  elements.push_back(Subspace::full(2));
  names.push_back("I");

  const int n = static_cast<int>(elements.size());
  auto find = [&](const Subspace& s) -> int {
    for (int i = 0; i < n; ++i)
      if (elements[static_cast<std::size_t>(i)].same_as(s)) return i;
    return -1;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (elements[static_cast<std::size_t>(i)].same_as(
              elements[static_cast<std::size_t>(j)]))
        fail("eigenspaces of '" + names[static_cast<std::size_t>(i)] +
             "' and '" + names[static_cast<std::size_t>(j)] + "' coincide");

  std::vector<lattice::ElementId> comp(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const Subspace& si = elements[static_cast<std::size_t>(i)];
    int oc = find(ortho_subspace(si));
    if (oc < 0)
      throw std::logic_error("subspace set not closed under complement");
    comp[static_cast<std::size_t>(i)] = oc;
    for (int j = 0; j < n; ++j) {
      const Subspace& sj = elements[static_cast<std::size_t>(j)];
      if (find(meet_subspace(si, sj)) < 0 || find(join_subspace(si, sj)) < 0)
        throw std::logic_error("subspace set not closed under meet/join");
    }
  }

  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (elements[static_cast<std::size_t>(i)].contained_in(
              elements[static_cast<std::size_t>(j)]))
        leq[static_cast<std::size_t>(i) * n + j] = 1;
  return SubspaceLattice{
      2, std::move(elements),
      lattice::NamedLattice{
          lattice::FiniteOrtholattice(n, std::move(leq), std::move(comp)),
          std::move(names)}};
}

std::optional<std::vector<lattice::ElementId>> check_isomorphic(
    const lattice::FiniteOrtholattice& L1,
    const lattice::FiniteOrtholattice& L2) {
  const int n = L1.size();
  if (n != L2.size()) return std::nullopt;

  // Order-invariant signatures prune the search: counts of elements below
  // and above must match between mapped elements.
  auto profile = [](const lattice::FiniteOrtholattice& L) {
    std::vector<std::pair<int, int>> prof(static_cast<std::size_t>(L.size()));
    for (int a = 0; a < L.size(); ++a) {
      int down = 0, up = 0;
      for (int b = 0; b < L.size(); ++b) {
        if (L.leq(b, a)) ++down;
        if (L.leq(a, b)) ++up;
      }
      prof[static_cast<std::size_t>(a)] = {down, up};
    }
    return prof;
  };
  const auto prof1 = profile(L1), prof2 = profile(L2);

  std::vector<lattice::ElementId> map(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  auto consistent = [&](int a, int b) {
    if (prof1[static_cast<std::size_t>(a)] != prof2[static_cast<std::size_t>(b)])
      return false;
    int ca = L1.complement(a);
    if (map[static_cast<std::size_t>(ca)] >= 0 &&
        map[static_cast<std::size_t>(ca)] != L2.complement(b))
      return false;
    for (int c = 0; c < n; ++c) {
      int mc = map[static_cast<std::size_t>(c)];
      if (mc < 0) continue;
      if (L1.leq(a, c) != L2.leq(b, mc)) return false;
      if (L1.leq(c, a) != L2.leq(mc, b)) return false;
    }
    return true;
  };

  // Depth-first over element ids; lattices here are small (paper objects
  // have 6 elements), so the profile pruning is already overkill.
  auto search = [&](auto&& self, int a) -> bool {
    if (a == n) return true;
    for (int b = 0; b < n; ++b) {
      if (used[static_cast<std::size_t>(b)] || !consistent(a, b)) continue;
      map[static_cast<std::size_t>(a)] = b;
      used[static_cast<std::size_t>(b)] = true;
      if (self(self, a + 1)) return true;
      map[static_cast<std::size_t>(a)] = -1;
      used[static_cast<std::size_t>(b)] = false;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return map;
}

std::string format_subspace(const Subspace& s) {
  std::ostringstream out;
  out << "ambient_dim " << s.ambient_dim() << "\n";
  out << "rank " << s.rank() << "\n";
  for (int c = 0; c < s.rank(); ++c) {
    out << "v" << c;
    for (int r = 0; r < s.ambient_dim(); ++r) {
      std::complex<double> z = s.basis()(r, c);
      out << " (" << g12(z.real()) << ", " << g12(z.imag()) << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace geon::hilbert
