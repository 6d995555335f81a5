#include "spincluster/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "spincluster/errors.hpp"

namespace spincluster {

int LevelSet::total_multiplicity() const {
  return std::accumulate(levels.begin(), levels.end(), 0,
                         [](int acc, const Level& l) { return acc + l.multiplicity; });
}

double LevelSet::weighted_sum() const {
  double sum = 0.0;
  for (const Level& l : levels) sum += l.energy * l.multiplicity;
  return sum;
}

const Level& LevelSet::find(const std::string& label) const {
  for (const Level& l : levels)
    if (l.label == label) return l;
  throw DomainError("LevelSet: no level labelled '" + label + "'");
}

LevelSet triangle_levels(double j12, double j13) {
  return {{{"alpha", 0.5, j13 / 4 - j12, 2},
           {"beta", 0.5, -0.75 * j13, 2},
           {"quartet", 1.5, j12 / 2 + j13 / 4, 4}}};
}

LevelSet parallelogram_levels(double a12, double a13) {
  return {{{"E_2", 2.0, a12 + a13 / 2, 5},
           {"E^1", 1.0, -a13 / 2, 3},
           {"E^2", 1.0, a12 / 3 - 5 * a13 / 6, 3},
           {"E^3", 1.0, -4 * a12 / 3 + 5 * a13 / 6, 3},
           {"E^+", 0.0, -2 * a12 + a13 / 2, 1},
           {"E^-", 0.0, -1.5 * a13, 1}}};
}

double level_discrepancy(const LevelSet& levels, const OperatorMatrix& hamiltonian) {
  std::vector<double> closed;
  for (const Level& l : levels.levels) closed.insert(closed.end(), l.multiplicity, l.energy);
  const Spectrum spec = hermitian_eig(hamiltonian);
  if (static_cast<Eigen::Index>(closed.size()) != spec.eigenvalues.size()) {
    throw DomainError("level_discrepancy: level multiplicities do not match the Hilbert dimension");
  }
  std::sort(closed.begin(), closed.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    worst = std::max(worst, std::abs(closed[i] - spec.eigenvalues(static_cast<Eigen::Index>(i))));
  }
  return worst;
}

GroundLevels ground_levels(const LevelSet& set, double tie_tol) {
  if (set.levels.empty()) throw DomainError("ground_levels: empty level set");
  double scale = 0.0;
  double lowest = set.levels.front().energy;
  for (const Level& l : set.levels) {
    scale = std::max(scale, std::abs(l.energy));
    lowest = std::min(lowest, l.energy);
  }
  if (tie_tol <= 0.0) tie_tol = 1e-9 * std::max(scale, 1e-300);

  GroundLevels g{{}, std::nullopt, lowest};
  bool mixed = false;
  for (const Level& l : set.levels) {
    if (l.energy - lowest > tie_tol) continue;
    if (g.labels.empty()) {
      g.S = l.S;
    } else if (l.S != *g.S) {
      mixed = true;
    }
    g.labels.push_back(l.label);
  }
  if (mixed) g.S.reset();
  return g;
}

PhasePoint classify_ground(double a12, double a13, double tie_tol) {
  GroundLevels g = ground_levels(parallelogram_levels(a12, a13), tie_tol);
  return {a12, a13, std::move(g.labels), g.S, g.energy};
}

namespace {

std::vector<double> axis_values(AxisRange r, int n_grid, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw DomainError(std::string("phase_map: ") + name + " range must be finite");
  }
  if (r.lo > r.hi) throw DomainError(std::string("phase_map: ") + name + " range is inverted");
  if (r.lo == r.hi) return {r.lo};
  if (n_grid < 2) throw DomainError("phase_map: n_grid must be at least 2 for a non-degenerate range");
  std::vector<double> out(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) out[i] = r.lo + (r.hi - r.lo) * i / (n_grid - 1);
  return out;
}

}  // namespace

std::vector<PhasePoint> phase_map(AxisRange a12, AxisRange a13, int n_grid) {
  if (n_grid < 1) throw DomainError("phase_map: n_grid must be positive");
  const std::vector<double> xs = axis_values(a12, n_grid, "a12");
  const std::vector<double> ys = axis_values(a13, n_grid, "a13");
  std::vector<PhasePoint> out;
  out.reserve(xs.size() * ys.size());
  for (double x : xs)
    for (double y : ys) out.push_back(classify_ground(x, y));
  return out;
}

bool OrderingReport::all_hold() const {
  return std::all_of(link_holds.begin(), link_holds.end(), [](bool b) { return b; });
}

OrderingReport ordering_report(double a12, double a13) {
  const LevelSet set = parallelogram_levels(a12, a13);
  OrderingReport r;
  r.chain = {"E^3", "E^+", "E_2", "E^-", "E^1", "E^2"};
  for (std::size_t i = 0; i + 1 < r.chain.size(); ++i) {
    r.link_holds.push_back(set.find(r.chain[i]).energy < set.find(r.chain[i + 1]).energy);
  }
  const PhasePoint g = classify_ground(a12, a13);
  r.ground_is_first = g.ground_labels.size() == 1 && g.ground_labels.front() == r.chain.front();
  return r;
}

SectorGround ground_state_in_sector(const SpinRegister& reg, const OperatorMatrix& h, double m) {
  if (h.rows() != reg.dimension() || h.cols() != reg.dimension()) {
    throw DomainError("ground_state_in_sector: operator dimension does not match register");
  }
  const double downs_real = reg.n_sites() / 2.0 - m;
  const int downs = static_cast<int>(std::lround(downs_real));
  if (std::abs(downs_real - downs) > 1e-12 || downs < 0 || downs > reg.n_sites()) {
    throw DomainError("ground_state_in_sector: m is not an allowed S_z value for this register");
  }
  std::vector<int> idx;
  for (int b = 0; b < reg.dimension(); ++b)
    if (std::popcount(static_cast<unsigned>(b)) == downs) idx.push_back(b);

  const Eigen::Index d = static_cast<Eigen::Index>(idx.size());
  OperatorMatrix block(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) block(r, c) = h(idx[r], idx[c]);
  const Spectrum spec = hermitian_eig(block);

  SectorGround out;
  out.energy = spec.eigenvalues(0);
  out.gap = d > 1 ? spec.eigenvalues(1) - spec.eigenvalues(0) : std::numeric_limits<double>::infinity();
  out.state = StateVector::Zero(reg.dimension());
  for (Eigen::Index r = 0; r < d; ++r) out.state(idx[r]) = spec.eigenvectors(r, 0);
  out.state = fix_phase(out.state);
  return out;
}

}  // namespace spincluster
