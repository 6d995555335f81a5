#pragma once

#include <optional>
#include <vector>

#include "spincluster/spin_ops.hpp"

namespace spincluster {

/// Per-site weights u_i of the one-body part of the Yangian generator.
struct YangianWeights {
  std::vector<double> u;

  static YangianWeights zeros(int n) { return {std::vector<double>(n, 0.0)}; }
};

/// Y = sum_i u_i S_i + i sum_{i<j} S_i x S_j.
VectorOperator build_yangian(const SpinRegister& reg, const YangianWeights& w);

/// Q = Y . Y = Y_x^2 + Y_y^2 + Y_z^2.
OperatorMatrix build_q(const SpinRegister& reg, const YangianWeights& w);

/// Q written out as a polynomial in S_i.S_j and S_i.(S_j x S_k), assembled
/// term by term without going through Y. Only n = 3 and n = 4 are available.
OperatorMatrix expanded_q(const SpinRegister& reg, const YangianWeights& w);

/// Anti-Hermitian part of Q is a sum of scalar triple products with linear
/// coefficients in u; this returns those coefficients (one per ordered
/// triple i<j<k, lexicographic). n = 3 gives u1-u2+u3; n = 4 gives four.
std::vector<double> q_triple_coefficients(const YangianWeights& w, int n);

/// True iff every triple coefficient vanishes (|c| <= tol), which is
/// equivalent to Q being Hermitian. Supports n = 3 and n = 4.
bool q_hermiticity_condition(const YangianWeights& w, int n, double tol = 1e-12);

struct AxiomReport {
  double level_zero_residual = 0.0;
  double serre_residual = 0.0;
  double fitted_lambda = 0.0;
  // False when both sides of the Serre relation vanish identically, so any
  // lambda fits (happens for two sites).
  bool lambda_identifiable = false;
  bool serre_consistent = false;
};

inline constexpr double kSerreTolerance = 1e-10;

/// Checks the level-zero relations [I_a, I_b] = i eps I_c, [I_a, Y_b] = i eps Y_c
/// with I the total spin, then least-squares fits lambda in
///   [J+, [J3, J+]] = (lambda/4) I+ (J+ I3 - I+ J3)
/// and its J-/I- mirror (J = Y) and reports the residual at the fitted value.
AxiomReport check_yangian_axioms(const SpinRegister& reg, const YangianWeights& w);

struct LabeledState {
  StateVector vector;
  double S = 0.0;
  double m = 0.0;
  double q = 0.0;
  // Shares all three labels with at least one other state of the basis.
  bool degenerate = false;
};

struct LabeledBasis {
  std::vector<LabeledState> states;

  /// States carrying labels (S, m, q) to within `tol`.
  std::vector<const LabeledState*> find(double S, double m, double q, double tol = 1e-8) const;
};

/// Simultaneous eigenbasis of {S^2, S_z, Q}, sorted by (S, m, q) ascending.
/// Each vector has the phase convention of fix_phase. Throws PreconditionError
/// when Q is not Hermitian.
LabeledBasis q_joint_labels(const SpinRegister& reg, const YangianWeights& w);

}  // namespace spincluster
