#include "spincluster/spin_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spincluster/errors.hpp"

namespace spincluster {

namespace {

void require_site(const SpinRegister& reg, int site) {
  if (site < 0 || site >= reg.n_sites()) {
    std::ostringstream msg;
    msg << "site " << site << " out of range for a " << reg.n_sites() << "-site register";
    throw DomainError(msg.str());
  }
}

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols() << " vs " << b.rows()
        << "x" << b.cols() << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

SpinRegister::SpinRegister(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw DomainError("register size must be in [1, " + std::to_string(kMaxSites) + "], got " +
                      std::to_string(n_sites));
  }
}

const OperatorMatrix& VectorOperator::operator[](Axis a) const {
  switch (a) {
    case Axis::x: return x;
    case Axis::y: return y;
    default: return z;
  }
}

OperatorMatrix& VectorOperator::operator[](Axis a) {
  switch (a) {
    case Axis::x: return x;
    case Axis::y: return y;
    default: return z;
  }
}

VectorOperator spin_matrices(int two_s) {
  if (two_s < 1) throw DomainError("spin_matrices: 2s must be positive");
  const int d = two_s + 1;
  const double s = two_s / 2.0;
  VectorOperator out{OperatorMatrix::Zero(d, d), OperatorMatrix::Zero(d, d),
                     OperatorMatrix::Zero(d, d)};
  // Row r carries m = s - r; S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>.
  OperatorMatrix raise = OperatorMatrix::Zero(d, d);
  for (int r = 1; r < d; ++r) {
    const double m = s - r;
    raise(r - 1, r) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  for (int r = 0; r < d; ++r) out.z(r, r) = s - r;
  const OperatorMatrix lower = raise.adjoint();
  out.x = 0.5 * (raise + lower);
  out.y = Complex(0, -0.5) * (raise - lower);
  return out;
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix embed_site_spin(const SpinRegister& reg, int site, Axis axis) {
  require_site(reg, site);
  static const VectorOperator half = spin_matrices(1);
  OperatorMatrix out = OperatorMatrix::Identity(1, 1);
  for (int k = 0; k < reg.n_sites(); ++k) {
    out = kron(out, k == site ? half[axis] : OperatorMatrix::Identity(2, 2));
  }
  return out;
}

VectorOperator site_spin(const SpinRegister& reg, int site) {
  return {embed_site_spin(reg, site, Axis::x), embed_site_spin(reg, site, Axis::y),
          embed_site_spin(reg, site, Axis::z)};
}

VectorOperator total_spin(const SpinRegister& reg) {
  const Eigen::Index d = reg.dimension();
  VectorOperator total{OperatorMatrix::Zero(d, d), OperatorMatrix::Zero(d, d),
                       OperatorMatrix::Zero(d, d)};
  for (int k = 0; k < reg.n_sites(); ++k) {
    const VectorOperator s = site_spin(reg, k);
    for (Axis a : kAxes) total[a] += s[a];
  }
  return total;
}

OperatorMatrix dot(const VectorOperator& a, const VectorOperator& b) {
  require_same_dim(a.x, b.x, "dot");
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

OperatorMatrix cross_component(const VectorOperator& a, const VectorOperator& b, Axis axis) {
  require_same_dim(a.x, b.x, "cross_component");
  switch (axis) {
    case Axis::x: return a.y * b.z - a.z * b.y;
    case Axis::y: return a.z * b.x - a.x * b.z;
    default: return a.x * b.y - a.y * b.x;
  }
}

VectorOperator cross(const VectorOperator& a, const VectorOperator& b) {
  return {cross_component(a, b, Axis::x), cross_component(a, b, Axis::y),
          cross_component(a, b, Axis::z)};
}

OperatorMatrix spin_dot(const SpinRegister& reg, int i, int j) {
  require_site(reg, i);
  require_site(reg, j);
  if (i == j) throw DomainError("spin_dot: sites must differ");
  return dot(site_spin(reg, i), site_spin(reg, j));
}

OperatorMatrix scalar_triple(const SpinRegister& reg, int i, int j, int k) {
  require_site(reg, i);
  require_site(reg, j);
  require_site(reg, k);
  if (i == j || j == k || i == k) throw DomainError("scalar_triple: sites must be distinct");
  return dot(site_spin(reg, i), cross(site_spin(reg, j), site_spin(reg, k)));
}

OperatorMatrix total_spin_squared(const SpinRegister& reg) {
  const VectorOperator s = total_spin(reg);
  return dot(s, s);
}

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y) {
  require_same_dim(x, y, "commutator");
  if (x.rows() != x.cols()) throw DomainError("commutator: operators must be square");
  return x * y - y * x;
}

double max_abs(const OperatorMatrix& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const OperatorMatrix& x) {
  if (x.rows() != x.cols()) throw DomainError("hermiticity_defect: matrix must be square");
  return 0.5 * max_abs(x - x.adjoint());
}

Spectrum hermitian_eig(const OperatorMatrix& x, double grouping_tol) {
  const double defect = hermiticity_defect(x);
  if (defect > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian (max asymmetry " << defect << ")";
    throw PreconditionError(msg.str());
  }
  const OperatorMatrix sym = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: solver did not converge");

  Spectrum out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double residual =
        (sym * out.eigenvectors.col(i) - out.eigenvalues(i) * out.eigenvectors.col(i)).norm();
    if (residual > kEigenResidualTolerance) {
      throw NumericalError("hermitian_eig: eigenpair residual " + std::to_string(residual));
    }
  }
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (i > 0 && out.eigenvalues(i) - out.eigenvalues(i - 1) < grouping_tol) {
      out.degeneracy_groups.back().push_back(static_cast<int>(i));
    } else {
      out.degeneracy_groups.push_back({static_cast<int>(i)});
    }
  }
  return out;
}

StateVector product_state(const SpinRegister& reg, std::string_view spins) {
  if (static_cast<int>(spins.size()) != reg.n_sites()) {
    throw DomainError("product_state: expected " + std::to_string(reg.n_sites()) + " spins");
  }
  int index = 0;
  for (char c : spins) {
    index <<= 1;
    if (c == 'd' || c == 'D') {
      index |= 1;
    } else if (c != 'u' && c != 'U') {
      throw DomainError(std::string("product_state: bad spin character '") + c + "'");
    }
  }
  StateVector v = StateVector::Zero(reg.dimension());
  v(index) = 1.0;
  return v;
}

StateVector fix_phase(const StateVector& v) {
  if (v.size() == 0) return v;
  const double largest = v.cwiseAbs().maxCoeff();
  if (largest == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) {
      return v * (std::conj(v(i)) / std::abs(v(i)));
    }
  }
  return v;
}

}  // namespace spincluster
