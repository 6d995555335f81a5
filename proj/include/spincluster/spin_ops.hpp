#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spincluster {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

/// A cluster of spin-1/2 sites.
///
/// Basis index b encodes the state of site k in bit (n_sites - 1 - k) of b:
/// site 0 is the leftmost tensor factor, bit value 0 is spin up (S_z = +1/2)
/// and 1 is spin down.
class SpinRegister {
 public:
  static constexpr int kMaxSites = 8;

  explicit SpinRegister(int n_sites);

  int n_sites() const { return n_sites_; }
  int dimension() const { return 1 << n_sites_; }

  // True when `site` is down in basis state `index`.
  bool is_down(int index, int site) const { return (index >> (n_sites_ - 1 - site)) & 1; }

 private:
  int n_sites_;
};

/// Three Cartesian components of an operator-valued vector sharing one dimension.
struct VectorOperator {
  OperatorMatrix x, y, z;

  const OperatorMatrix& operator[](Axis a) const;
  OperatorMatrix& operator[](Axis a);
  Eigen::Index dim() const { return x.rows(); }
};

/// Ascending eigendata of a Hermitian matrix.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  OperatorMatrix eigenvectors;  // column i belongs to eigenvalues[i]
  std::vector<std::vector<int>> degeneracy_groups;
};

inline constexpr double kGroupingTolerance = 1e-9;
inline constexpr double kEigenResidualTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;

// Spin-s matrices (s = two_s / 2) in the |s, s>, |s, s-1>, ... ordering.
VectorOperator spin_matrices(int two_s);

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

OperatorMatrix embed_site_spin(const SpinRegister& reg, int site, Axis axis);
VectorOperator site_spin(const SpinRegister& reg, int site);
VectorOperator total_spin(const SpinRegister& reg);

OperatorMatrix spin_dot(const SpinRegister& reg, int i, int j);
OperatorMatrix scalar_triple(const SpinRegister& reg, int i, int j, int k);

OperatorMatrix dot(const VectorOperator& a, const VectorOperator& b);
OperatorMatrix cross_component(const VectorOperator& a, const VectorOperator& b, Axis axis);
VectorOperator cross(const VectorOperator& a, const VectorOperator& b);

// Total-spin Casimir (sum_i S_i)^2.
OperatorMatrix total_spin_squared(const SpinRegister& reg);

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y);

// max |X - X^dagger| / 2 entrywise.
double hermiticity_defect(const OperatorMatrix& x);
double max_abs(const OperatorMatrix& x);

/// Eigendecomposition of a Hermitian matrix. Throws PreconditionError when
/// the input is not Hermitian to kHermitianTolerance and NumericalError when
/// an eigenpair residual exceeds kEigenResidualTolerance.
Spectrum hermitian_eig(const OperatorMatrix& x, double grouping_tol = kGroupingTolerance);

// Product state from a string of 'u'/'d' characters, one per site.
StateVector product_state(const SpinRegister& reg, std::string_view spins);

// Multiply by a unit phase so the first entry of largest magnitude is real positive.
StateVector fix_phase(const StateVector& v);

}  // namespace spincluster
