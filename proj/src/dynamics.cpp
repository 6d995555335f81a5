#include "spincluster/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "spincluster/errors.hpp"

namespace spincluster {

void RateParams::validate() const {
  if (!(std::isfinite(A) && A > 0)) throw DomainError("RateParams: A must be positive");
  if (!(std::isfinite(inv_temp) && inv_temp > 0)) throw DomainError("RateParams: inv_temp must be positive");
  if (!std::isfinite(gamma) || gamma == 0.0) throw DomainError("RateParams: gamma must be finite and nonzero");
  if (!(std::isfinite(delta_gap) && delta_gap >= 0)) throw DomainError("RateParams: delta_gap must be >= 0");
}

void FieldProfile::validate() const {
  if (!std::isfinite(amplitude) || !std::isfinite(angular_rate)) {
    throw DomainError("FieldProfile: amplitude and angular_rate must be finite");
  }
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
    throw DomainError("FieldProfile: need t_end > t_start");
  }
}

double FieldProfile::field(double t) const {
  switch (kind) {
    case FieldKind::sinusoid: return amplitude * std::sin(angular_rate * t);
    case FieldKind::linear_ramp: return amplitude + angular_rate * (t - t_start);
    case FieldKind::constant: return amplitude;
  }
  return amplitude;
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::sinusoid: return "sinusoid";
    case FieldKind::linear_ramp: return "linear_ramp";
    case FieldKind::constant: return "constant";
  }
  return "?";
}

FieldKind field_kind_from_string(const std::string& name) {
  if (name == "sinusoid") return FieldKind::sinusoid;
  if (name == "linear_ramp") return FieldKind::linear_ramp;
  if (name == "constant") return FieldKind::constant;
  throw DomainError("unknown field profile kind '" + name + "'");
}

std::string to_string(CoefficientMode mode) {
  return mode == CoefficientMode::derived ? "derived" : "paper_verbatim";
}

CoefficientMode coefficient_mode_from_string(const std::string& name) {
  if (name == "derived") return CoefficientMode::derived;
  if (name == "paper_verbatim") return CoefficientMode::paper_verbatim;
  throw DomainError("unknown coefficient mode '" + name + "' (expected derived or paper_verbatim)");
}

std::string to_string(LzsMode mode) { return mode == LzsMode::off ? "off" : "adiabatic"; }

LzsMode lzs_mode_from_string(const std::string& name) {
  if (name == "off") return LzsMode::off;
  if (name == "adiabatic") return LzsMode::adiabatic;
  throw DomainError("unknown lzs mode '" + name + "' (expected off or adiabatic)");
}

// ---------------------------------------------------------------------------

OperatorMatrix coupled_spin1_hamiltonian(double B, double delta_gap, double gamma) {
  const VectorOperator s = spin_matrices(2);
  const OperatorMatrix id = OperatorMatrix::Identity(3, 3);
  VectorOperator a, b;
  for (Axis ax : kAxes) {
    a[ax] = kron(s[ax], id);
    b[ax] = kron(id, s[ax]);
  }
  return gamma * B * (a.z + b.z) + delta_gap * cross_component(a, b, Axis::y);
}

NineLevelFormulas nine_level_formulas(double B, double delta_gap, double gamma) {
  const double x = gamma * gamma * B * B;
  const double d = delta_gap * delta_gap;
  const double outer = 5 * x + 3 * d;
  const double root_printed = std::sqrt(9 * x * x + 30 * x + d * d);
  const double root_corrected = std::sqrt(9 * x * x + 30 * x * d + d * d);
  const double r = 1.0 / std::sqrt(2.0);
  const double e21 = std::sqrt(x + d);

  // sqrt of a negative radicand stays NaN on purpose: the report shows it.
  auto fill = [&](double root, std::array<double, 9>& v) {
    const double hi = r * std::sqrt(outer + root);
    const double lo = r * std::sqrt(outer - root);
    v = {-hi, -lo, -e21, 0.0, 0.0, 0.0, e21, lo, hi};
  };
  NineLevelFormulas f;
  f.labels = {"E2_-2", "E1_-1", "E2_-1", "E2_0", "E1_0",
              "E0_0",  "E2_1",  "E1_1",  "E2_2"};
  fill(root_printed, f.printed);
  fill(root_corrected, f.corrected);
  return f;
}

LevelComparisonReport coupled_levels_report(const std::vector<double>& B_grid, double delta_gap,
                                            double gamma) {
  if (B_grid.empty()) throw DomainError("coupled_levels_report: empty field grid");
  LevelComparisonReport rep;
  rep.B = B_grid;
  rep.max_printed_discrepancy.fill(0.0);
  rep.max_corrected_discrepancy.fill(0.0);
  constexpr int kAsserted[] = {2, 3, 4, 5, 6};

  for (double B : B_grid) {
    const OperatorMatrix h = coupled_spin1_hamiltonian(B, delta_gap, gamma);
    const Spectrum spec = hermitian_eig(h);
    for (Eigen::Index c = 0; c < 9; ++c) {
      const double res = (h * spec.eigenvectors.col(c) - spec.eigenvalues(c) * spec.eigenvectors.col(c)).norm();
      rep.max_eigen_residual = std::max(rep.max_eigen_residual, res);
    }
    const NineLevelFormulas f = nine_level_formulas(B, delta_gap, gamma);
    rep.labels = f.labels;

    std::array<int, 9> order;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return f.corrected[i] < f.corrected[j]; });
    std::array<double, 9> paired{};
    for (int rank = 0; rank < 9; ++rank) paired[order[rank]] = spec.eigenvalues(rank);

    for (int i = 0; i < 9; ++i) {
      const double dp = std::abs(f.printed[i] - paired[i]);
      const double dc = std::abs(f.corrected[i] - paired[i]);
      // NaN sticks once it appears.
      if (std::isnan(dp) || std::isnan(rep.max_printed_discrepancy[i])) {
        rep.max_printed_discrepancy[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        rep.max_printed_discrepancy[i] = std::max(rep.max_printed_discrepancy[i], dp);
      }
      rep.max_corrected_discrepancy[i] = std::max(rep.max_corrected_discrepancy[i], dc);
    }
    for (int i : kAsserted) {
      rep.asserted_discrepancy = std::max(rep.asserted_discrepancy, std::abs(f.printed[i] - paired[i]));
    }
    rep.numeric.push_back(paired);
    rep.printed.push_back(f.printed);
    rep.corrected.push_back(f.corrected);
  }
  rep.asserted_ok = rep.asserted_discrepancy <= kLevelTolerance;
  return rep;
}

ThreeLevel lzs_three_level(double B, double delta_gap) {
  if (!std::isfinite(B) || !std::isfinite(delta_gap)) throw DomainError("lzs_three_level: inputs must be finite");
  if (delta_gap < 0) throw DomainError("lzs_three_level: delta_gap must be >= 0");
  if (B == 0.0 && delta_gap == 0.0) {
    throw DomainError("lzs_three_level: mixing angle undefined at B = Delta = 0");
  }
  const double h = delta_gap / std::sqrt(2.0);
  ThreeLevel out;
  out.hamiltonian << B, h, 0, h, 0, h, 0, h, -B;
  out.beta = std::atan2(delta_gap, B);
  const double r = std::hypot(B, delta_gap);
  out.eigenvalues << -r, 0.0, r;
  const double c = std::cos(out.beta), s = std::sin(out.beta);
  const double q = 1.0 / std::sqrt(2.0);
  out.eigenvectors.col(0) << (1 + c) / 2, s * q, (1 - c) / 2;
  out.eigenvectors.col(1) << -s * q, c, s * q;
  out.eigenvectors.col(2) << (1 - c) / 2, -s * q, (1 + c) / 2;
  return out;
}

// ---------------------------------------------------------------------------

double transition_rate(double A, double inv_temp, double delta) {
  if (!(A > 0)) throw DomainError("transition_rate: A must be positive");
  if (!(inv_temp > 0)) throw DomainError("transition_rate: inv_temp must be positive");
  if (delta == 0.0) return 0.0;
  // 1 - exp(-b d) without cancellation near d = 0.
  const double denom = -std::expm1(-inv_temp * delta);
  const double w = A * delta * delta * delta / denom;
  return w > 0 ? w : 0.0;
}

RateTable rates_for_spacing(const RateParams& params, double level_spacing) {
  constexpr int N[3] = {1, 0, -1};
  RateTable t;
  for (int from = 0; from < 3; ++from)
    for (int to = 0; to < 3; ++to) {
      if (from == to) continue;
      const double delta = level_spacing * (N[from] - N[to]);
      t.w[from][to] = transition_rate(params.A, params.inv_temp, delta);
    }
  return t;
}

BlochCoefficients rate_matrix_coefficients(const RateTable& w, CoefficientMode mode) {
  for (const auto& row : w.w)
    for (double x : row)
      if (!(x >= 0)) throw DomainError("rate_matrix_coefficients: rates must be nonnegative");
  using L = ZeemanLevel;
  const double wp0 = w(L::plus, L::zero), wm0 = w(L::minus, L::zero);
  const double w0p = w(L::zero, L::plus), w0m = w(L::zero, L::minus);
  const double wpm = w(L::plus, L::minus), wmp = w(L::minus, L::plus);

  BlochCoefficients c;
  c.C1 = -0.5 * (wp0 + wm0) - wpm - wmp;
  if (mode == CoefficientMode::paper_verbatim) c.C1 = -0.5 * (wm0 - wp0) - wmp - wpm;
  c.C2 = 0.5 * (wp0 - wm0) + w0p - w0m + wpm - wmp;
  c.C3 = 0.5 * (wp0 - wm0);
  c.C4 = -0.5 * (wp0 + wm0 + 2 * w0p + 2 * w0m);
  c.E = 0.5 * (wm0 - wp0) + wmp - wpm;
  c.F = 0.5 * (wp0 + wm0);
  return c;
}

namespace {

// Boltzmann weights for E_N = N * spacing, ordered (+, 0, -).
std::array<double, 3> boltzmann(double spacing, double inv_temp) {
  const double e = inv_temp * spacing;
  // Shift by the lowest energy to keep exponents <= 0.
  const double shift = std::abs(e);
  std::array<double, 3> p = {std::exp(-e - shift), std::exp(-shift), std::exp(e - shift)};
  const double z = p[0] + p[1] + p[2];
  for (double& x : p) x /= z;
  return p;
}

double level_spacing(const RateParams& p, double B, LzsMode mode) {
  if (mode == LzsMode::off) return p.gamma * B;
  return std::hypot(p.gamma * B, p.delta_gap);
}

double cos_beta(const RateParams& p, double B, LzsMode mode) {
  if (mode == LzsMode::off) return 1.0;
  const double r = std::hypot(p.gamma * B, p.delta_gap);
  return r > 0 ? p.gamma * B / r : 1.0;
}

struct State {
  double x, r0;
};

State rhs(const RateParams& p, double B, LzsMode lzs, CoefficientMode cm, State s) {
  const BlochCoefficients c = rate_matrix_coefficients(rates_for_spacing(p, level_spacing(p, B, lzs)), cm);
  return {c.C1 * s.x + c.C2 * s.r0 + c.E, c.C3 * s.x + c.C4 * s.r0 + c.F};
}

double population_violation(State s) {
  const double pp = 0.5 * (1 - s.r0 + s.x);
  const double pm = 0.5 * (1 - s.r0 - s.x);
  double v = 0.0;
  for (double q : {pp, s.r0, pm}) v = std::max({v, -q, q - 1.0});
  return v;
}

}  // namespace

std::array<double, 3> equilibrium_populations(double B, const RateParams& params) {
  params.validate();
  return boltzmann(params.gamma * B, params.inv_temp);
}

double Trajectory::max_abs_m() const {
  double m = 0.0;
  for (const TrajectoryRow& r : rows) m = std::max(m, std::abs(r.M_norm));
  return m;
}

Trajectory integrate_magnetization(const RateParams& params, const FieldProfile& profile,
                                   const InitialCondition& init, int n_steps, LzsMode lzs_mode,
                                   CoefficientMode coeff_mode) {
  params.validate();
  profile.validate();
  if (n_steps < 10) throw DomainError("integrate_magnetization: n_steps must be at least 10");

  State s{};
  switch (init.kind) {
    case InitialCondition::Kind::equilibrium: {
      const auto p = boltzmann(level_spacing(params, profile.field(profile.t_start), lzs_mode), params.inv_temp);
      s = {p[0] - p[2], p[1]};
      break;
    }
    case InitialCondition::Kind::polarized_up: s = {1.0, 0.0}; break;
    case InitialCondition::Kind::explicit_state:
      s = {-init.n0, init.rho00};
      if (!std::isfinite(s.x) || !std::isfinite(s.r0) || population_violation(s) > 1e-12) {
        throw DomainError("integrate_magnetization: explicit (n0, rho00) is not a valid population");
      }
      break;
  }

  const double t0 = profile.t_start;
  const double h = (profile.t_end - profile.t_start) / n_steps;
  const double m_scale = params.gamma / std::abs(params.gamma);

  Trajectory traj;
  traj.rows.reserve(static_cast<std::size_t>(n_steps) + 1);
  auto record = [&](double t, State st) {
    const double B = profile.field(t);
    const double n = 0.0 - st.x;  // avoid printing -0
    traj.rows.push_back({t, B, m_scale * cos_beta(params, B, lzs_mode) * n + 0.0, st.r0, n});
    traj.max_population_violation = std::max(traj.max_population_violation, population_violation(st));
  };
  record(t0, s);

  auto f = [&](double t, State st) { return rhs(params, profile.field(t), lzs_mode, coeff_mode, st); };
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + h * i;
    const State k1 = f(t, s);
    const State k2 = f(t + h / 2, {s.x + h / 2 * k1.x, s.r0 + h / 2 * k1.r0});
    const State k3 = f(t + h / 2, {s.x + h / 2 * k2.x, s.r0 + h / 2 * k2.r0});
    const State k4 = f(t + h, {s.x + h * k3.x, s.r0 + h * k3.r0});
    s.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.r0 += h / 6 * (k1.r0 + 2 * k2.r0 + 2 * k3.r0 + k4.r0);

    const double violation = std::isfinite(s.x) && std::isfinite(s.r0) ? population_violation(s)
                                                                        : std::numeric_limits<double>::infinity();
    if (violation > kStabilityMargin) {
      std::ostringstream msg;
      msg << "integrate_magnetization: populations left [0, 1] by " << violation << " at t = " << t + h
          << " (step " << i + 1 << " of " << n_steps << "); increase n_steps";
      throw NumericalError(msg.str());
    }
    // Last point lands exactly on t_end.
    record(i + 1 == n_steps ? profile.t_end : t0 + h * (i + 1), s);
  }
  return traj;
}

double rho00_mode_difference(const RateParams& params, const FieldProfile& profile,
                             const InitialCondition& init, int n_steps) {
  const Trajectory off = integrate_magnetization(params, profile, init, n_steps, LzsMode::off);
  const Trajectory ad = integrate_magnetization(params, profile, init, n_steps, LzsMode::adiabatic);
  double worst = 0.0;
  for (std::size_t i = 0; i < off.rows.size(); ++i) {
    worst = std::max(worst, std::abs(off.rows[i].rho00 - ad.rows[i].rho00));
  }
  return worst;
}

double loop_area(const Trajectory& traj, double B0, std::size_t begin, std::size_t end) {
  if (end > traj.rows.size() || begin >= end) throw DomainError("loop_area: invalid row range");
  const double scale = B0 != 0.0 ? std::abs(B0) : 1.0;
  double area = 0.0;
  for (std::size_t i = begin; i + 1 < end; ++i) {
    const TrajectoryRow& a = traj.rows[i];
    const TrajectoryRow& b = traj.rows[i + 1];
    area += 0.5 * (a.M_norm + b.M_norm) * (b.B - a.B) / scale;
  }
  return area;
}

}  // namespace spincluster
