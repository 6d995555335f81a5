#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spincluster/spin_ops.hpp"

namespace spincluster {

/// Symmetric exchange constants a_ij (i < j) of an n-site Heisenberg cluster.
///
/// Values are stored in lexicographic pair order (0,1), (0,2), ..., (n-2,n-1).
class CouplingSet {
 public:
  explicit CouplingSet(int n_sites);
  CouplingSet(int n_sites, std::vector<double> values);

  int n_sites() const { return n_sites_; }
  std::size_t size() const { return values_.size(); }

  double at(int i, int j) const;
  void set(int i, int j, double value);

  const std::vector<double>& values() const { return values_; }
  std::pair<int, int> pair(std::size_t index) const;
  // "12", "13", ... with 1-based site numbers.
  std::string pair_name(std::size_t index) const;

  static std::size_t pair_count(int n_sites) { return n_sites * (n_sites - 1) / 2; }

 private:
  std::size_t index_of(int i, int j) const;

  int n_sites_;
  std::vector<double> values_;
};

/// Orthonormal basis (in coefficient space) of all couplings whose
/// Hamiltonian commutes with a given operator.
struct CouplingFamily {
  std::vector<CouplingSet> basis;
  int dimension = 0;
  std::vector<double> singular_values;  // descending
  double max_commutator_residual = 0.0;  // over basis elements
};

inline constexpr double kCommutantRelativeTolerance = 1e-10;
inline constexpr double kCommutantMembershipTolerance = 1e-9;

/// H = sum_{i<j} a_ij S_i . S_j.
OperatorMatrix heisenberg_hamiltonian(const SpinRegister& reg, const CouplingSet& couplings);

/// Nullspace of a -> [Q, H(a)], from an SVD of the real-stacked
/// (2 dim^2) x (n(n-1)/2) coefficient matrix. Singular values at or below
/// tol * sigma_max span the family.
CouplingFamily commutant_family(const SpinRegister& reg, const OperatorMatrix& q,
                                double tol = kCommutantRelativeTolerance);

/// Orthogonal distance of a coupling vector from the span of a family.
double distance_from_family(const CouplingFamily& family, const CouplingSet& couplings);

/// Isosceles triangle: a12 = a23 = J12, a13 = J13.
CouplingSet constrained_couplings_triangle(double j12, double j13);

/// Four-site family with free a12, a34, a13:
///   a24 = (a12 + 2 a13 - a34) / 2, a14 = (a12 + 2 a13) / 3,
///   a23 = (2 a12 - 2 a13 + 3 a34) / 3.
CouplingSet constrained_couplings_parallelogram(double a12, double a34, double a13);

/// Parallelogram special case a34 = a12 (two independent constants).
CouplingSet parallelogram_couplings(double a12, double a13);

struct MixingAngle {
  double theta = 0.0;
  // 2x2 block of H on span{psi^1_{1,m}, psi^3_{1,m}} at m = -1.
  double h11 = 0.0, h33 = 0.0, h13 = 0.0;
  // Off-diagonal element of the rotated block; zero up to rounding.
  double rotated_offdiagonal = 0.0;
  // Largest change of the block entries across m = -1, 0, +1.
  double m_spread = 0.0;
};

/// Rotation angle theta that maps {psi^1, psi^3} (the degenerate S = 1,
/// q = -1/2 pair) onto eigenvectors of H via
///   psi1' = cos(theta/2) psi1 - sin(theta/2) psi3,
///   psi3' = sin(theta/2) psi1 + cos(theta/2) psi3.
/// Of the two solutions modulo pi, the one in (-pi/2, pi/2] is returned, so
/// that a block already diagonal gives theta = 0. Throws PreconditionError
/// when ||[Q, H]||_max exceeds kCommutantMembershipTolerance.
MixingAngle extract_mixing_theta(const SpinRegister& reg, const CouplingSet& couplings);

/// Reference closed-form relation between theta and (a12, a34, a13):
///   cos^2(t/2)(a12 - a34)/2 + sin^2(t/2) 5(a12 - a34)/2
///     + sin(t)/2 (-2 a12/3 - 2 a34 + 8 a13/3)
/// Returns its value (zero when the relation holds).
double reference_mixing_relation(double a12, double a34, double a13, double theta);

/// Smallest |reference_mixing_relation| over all theta. The relation equals
/// 3X - 2X cos(t) + (K/2) sin(t) with X = (a12 - a34)/2, so this is
/// max(0, |3X| - sqrt(4X^2 + K^2/4)). Positive values mean no theta works.
double reference_mixing_relation_min(double a12, double a34, double a13);

}  // namespace spincluster
