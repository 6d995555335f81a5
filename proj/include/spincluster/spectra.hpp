#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spincluster/spin_ops.hpp"
#include "spincluster/symmetry.hpp"

namespace spincluster {

struct Level {
  std::string label;
  double S = 0.0;
  double energy = 0.0;
  int multiplicity = 0;
};

struct LevelSet {
  std::vector<Level> levels;

  int total_multiplicity() const;
  // sum of energy * multiplicity; zero for a traceless Hamiltonian.
  double weighted_sum() const;
  const Level& find(const std::string& label) const;
};

/// Isosceles triangle levels (a12 = a23 = J12, a13 = J13):
///   alpha   = J13/4 - J12         S = 1/2, x2
///   beta    = -3 J13/4            S = 1/2, x2
///   quartet = J12/2 + J13/4       S = 3/2, x4
LevelSet triangle_levels(double j12, double j13);

/// Parallelogram levels (two free constants a12, a13):
///   E_2 = a12 + a13/2             S = 2, x5
///   E^1 = -a13/2                  S = 1, x3
///   E^2 = a12/3 - 5 a13/6         S = 1, x3
///   E^3 = -4 a12/3 + 5 a13/6      S = 1, x3
///   E^+ = -2 a12 + a13/2          S = 0, x1
///   E^- = -3 a13/2                S = 0, x1
LevelSet parallelogram_levels(double a12, double a13);

/// Largest |closed form - numeric eigenvalue| after expanding the level set by
/// multiplicity and sorting both lists. Throws if the dimensions differ.
double level_discrepancy(const LevelSet& levels, const OperatorMatrix& hamiltonian);

struct GroundLevels {
  std::vector<std::string> labels;
  std::optional<double> S;  // empty when tied levels carry different S
  double energy = 0.0;
};

/// Levels within `tie_tol` of the minimum; tie_tol <= 0 selects
/// 1e-9 * max|level|.
GroundLevels ground_levels(const LevelSet& levels, double tie_tol = 0.0);

struct PhasePoint {
  double a12 = 0.0;
  double a13 = 0.0;
  std::vector<std::string> ground_labels;
  std::optional<double> ground_S;  // empty when tied levels carry different S
  double ground_energy = 0.0;
};

/// Ground level(s) of the parallelogram. Labels within `tie_tol` of the
/// minimum are all reported; tie_tol <= 0 selects 1e-9 * max|level|.
PhasePoint classify_ground(double a12, double a13, double tie_tol = 0.0);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Ground-state classification on an n_grid x n_grid lattice, a12 outer,
/// a13 inner. A range with lo == hi contributes a single value; otherwise
/// n_grid must be at least 2. Throws DomainError on inverted ranges.
std::vector<PhasePoint> phase_map(AxisRange a12, AxisRange a13, int n_grid);

/// Checks the chain E^3 < E^+ < E_2 < E^- < E^1 < E^2 link by link.
struct OrderingReport {
  std::vector<std::string> chain;
  std::vector<bool> link_holds;  // link_holds[i]: chain[i] < chain[i+1]
  bool ground_is_first = false;
  bool all_hold() const;
};
OrderingReport ordering_report(double a12, double a13);

struct SectorGround {
  StateVector state;  // full-register vector, zero outside the sector
  double energy = 0.0;
  double gap = 0.0;   // to the next level in the sector; +inf if none
};

/// Lowest eigenvector of H restricted to the total S_z = m sector.
/// Throws DomainError if m is not an allowed value for the register.
SectorGround ground_state_in_sector(const SpinRegister& reg, const OperatorMatrix& h, double m);

}  // namespace spincluster
