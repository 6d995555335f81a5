#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spincluster/spin_ops.hpp"

namespace spincluster {

/// Phonon/field parameters of the S = 1 relaxation model.
struct RateParams {
  double A = 1.0;         // one-phonon prefactor, > 0
  double inv_temp = 1.0;  // beta, > 0
  double gamma = 1.0;     // field scale; M_max = |gamma|
  double delta_gap = 0.1; // LZS gap, >= 0

  void validate() const;
};

enum class FieldKind { sinusoid, linear_ramp, constant };

struct FieldProfile {
  FieldKind kind = FieldKind::sinusoid;
  double amplitude = 10.0;  // B0
  double angular_rate = 1.0;
  double t_start = 0.0;
  double t_end = 6.283185307179586;

  void validate() const;
  // sinusoid: B0 sin(w t); linear_ramp: B0 + w (t - t_start); constant: B0.
  double field(double t) const;
};

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Two coupled spin-1 clusters and the three-level reduction.

/// gamma B (S_Az + S_A'z) + delta (S_A x S_A')_y on the 3 x 3 product space.
OperatorMatrix coupled_spin1_hamiltonian(double B, double delta_gap, double gamma);

/// Closed forms for the nine levels. Labels in canonical order:
/// E2_-2, E1_-1, E2_-1, E2_0, E1_0, E0_0, E2_1, E1_1, E2_2 (E{l}_{m}).
/// `corrected` replaces the 30 g^2 B^2 term under the inner radical by
/// 30 g^2 B^2 Delta^2, which is the dimensionally consistent reading.
struct NineLevelFormulas {
  std::array<std::string, 9> labels;
  std::array<double, 9> printed;
  std::array<double, 9> corrected;
};
NineLevelFormulas nine_level_formulas(double B, double delta_gap, double gamma);

struct LevelComparisonReport {
  std::vector<double> B;
  std::array<std::string, 9> labels;
  // numeric[k][i]: eigenvalue paired with labels[i] at B[k].
  std::vector<std::array<double, 9>> numeric;
  std::vector<std::array<double, 9>> printed;
  std::vector<std::array<double, 9>> corrected;
  std::array<double, 9> max_printed_discrepancy{};    // NaN if a printed radicand went negative
  std::array<double, 9> max_corrected_discrepancy{};
  double max_eigen_residual = 0.0;
  // Zeros and E_{2,+-1}: the levels whose closed forms are asserted.
  double asserted_discrepancy = 0.0;
  bool asserted_ok = false;
};

inline constexpr double kLevelTolerance = 1e-9;

/// Pairs the sorted numeric eigenvalues with the labels sorted by their
/// corrected closed-form values, then compares both readings level by level.
LevelComparisonReport coupled_levels_report(const std::vector<double>& B_grid, double delta_gap,
                                            double gamma);

struct ThreeLevel {
  Eigen::Matrix3d hamiltonian;
  double beta = 0.0;          // cos(beta) = B / sqrt(B^2 + Delta^2)
  Eigen::Vector3d eigenvalues;  // E_-, E_0, E_+
  // Columns |E_+>, |E_0>, |E_->, written in terms of beta.
  Eigen::Matrix3d eigenvectors;
};

/// [[B, D/sqrt2, 0], [D/sqrt2, 0, D/sqrt2], [0, D/sqrt2, -B]]. Throws
/// DomainError when B = Delta = 0 (beta undefined) or Delta < 0.
ThreeLevel lzs_three_level(double B, double delta_gap);

// ---------------------------------------------------------------------------
// Rates and the population equations.

/// W(delta) = A delta^3 / (1 - exp(-inv_temp delta)), with W(0) = 0.
double transition_rate(double A, double inv_temp, double delta);

enum class ZeemanLevel { plus = 0, zero = 1, minus = 2 };

/// W[from][to] for the three levels + (N = 1), 0, - (N = -1).
struct RateTable {
  std::array<std::array<double, 3>, 3> w{};
  double operator()(ZeemanLevel from, ZeemanLevel to) const {
    return w[static_cast<int>(from)][static_cast<int>(to)];
  }
  double& operator()(ZeemanLevel from, ZeemanLevel to) { return w[static_cast<int>(from)][static_cast<int>(to)]; }
};

/// Rates between levels with energies E_N = N * level_spacing.
RateTable rates_for_spacing(const RateParams& params, double level_spacing);

enum class CoefficientMode { derived, paper_verbatim };
std::string to_string(CoefficientMode mode);
CoefficientMode coefficient_mode_from_string(const std::string& name);

/// d/dt (x, rho00) = [[C1, C2], [C3, C4]] (x, rho00) + (E, F), x = rho_pp - rho_mm.
struct BlochCoefficients {
  double C1 = 0, C2 = 0, C3 = 0, C4 = 0, E = 0, F = 0;
};

/// `derived` is the reduction of the three-population master equation under
/// rho_pp + rho_00 + rho_mm = 1. `paper_verbatim` keeps the published
/// coefficient list, whose C1 is larger by W_{+0}. Throws on negative rates.
BlochCoefficients rate_matrix_coefficients(const RateTable& w, CoefficientMode mode);

/// Boltzmann weights over E_N = gamma B N, ordered (rho_pp, rho_00, rho_mm).
std::array<double, 3> equilibrium_populations(double B, const RateParams& params);

enum class LzsMode { off, adiabatic };
std::string to_string(LzsMode mode);
LzsMode lzs_mode_from_string(const std::string& name);

struct InitialCondition {
  enum class Kind { equilibrium, polarized_up, explicit_state } kind = Kind::equilibrium;
  double n0 = 0.0;      // rho_mm - rho_pp, explicit only
  double rho00 = 0.0;   // explicit only

  static InitialCondition equilibrium() { return {}; }
  static InitialCondition polarized_up() { return {Kind::polarized_up, 0.0, 0.0}; }
  static InitialCondition explicit_state(double n0, double rho00) { return {Kind::explicit_state, n0, rho00}; }
};

struct TrajectoryRow {
  double t = 0, B = 0, M_norm = 0, rho00 = 0, n = 0;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  double max_abs_m() const;
  // Largest violation of 0 <= rho <= 1 over the implied populations.
  double max_population_violation = 0.0;
};

inline constexpr double kStabilityMargin = 1e-6;

/// Fixed-step RK4 over [t_start, t_end] with n_steps steps; one row per grid
/// point (n_steps + 1 rows). off: level energies gamma B N, M = -gamma x.
/// adiabatic: energies N sqrt(gamma^2 B^2 + Delta^2), n = -x,
/// M = gamma cos(beta) n. M_norm = M / |gamma|. Throws NumericalError when a
/// population leaves [-1e-6, 1 + 1e-6].
Trajectory integrate_magnetization(const RateParams& params, const FieldProfile& profile,
                                   const InitialCondition& init, int n_steps, LzsMode lzs_mode,
                                   CoefficientMode coeff_mode = CoefficientMode::derived);

/// Max |rho00_off(t) - rho00_adiabatic(t)| over a shared grid.
double rho00_mode_difference(const RateParams& params, const FieldProfile& profile,
                             const InitialCondition& init, int n_steps);

/// Signed area of the closed curve traced by (B / B0, M_norm) between two
/// row indices (trapezoid rule on M dB). B0 = |amplitude|, or 1 if that is 0.
double loop_area(const Trajectory& traj, double B0, std::size_t begin, std::size_t end);

}  // namespace spincluster
