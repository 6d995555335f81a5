#pragma once

#include <array>
#include <vector>

#include "spincluster/spin_ops.hpp"

namespace spincluster {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kSpinLabelTolerance = 1e-8;
inline constexpr double kPopulationTolerance = 1e-9;

/// Per-site moments mu_i = -g <S_i^z>, in Bohr magnetons.
struct MomentVector {
  std::vector<double> mu;
  double g = 2.0;
  double m_total = 0.0;  // <S_z> of the state
  // |sum mu_i + g m_total|; zero by linearity, kept as a self-check.
  double sum_rule_residual = 0.0;

  double sum() const;
};

MomentVector local_moments(const SpinRegister& reg, const StateVector& state, double g = 2.0);

struct SpinLabels {
  double S = 0.0;
  double m = 0.0;
  // ||S^2 psi - S(S+1) psi|| and ||S_z psi - m psi||.
  double casimir_residual = 0.0;
  double sz_residual = 0.0;
};

/// Recovers (S, m) of a joint eigenvector of S^2 and S_z. Throws
/// PreconditionError when either residual exceeds kSpinLabelTolerance or the
/// state is not normalized.
SpinLabels total_spin_labels(const SpinRegister& reg, const StateVector& state);

/// M = -scale (rho_pp - rho_mm) for populations (rho_pp, rho_00, rho_mm).
double magnetization_expectation(const std::array<double, 3>& populations, double scale = 1.0);

}  // namespace spincluster
