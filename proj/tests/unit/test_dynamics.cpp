#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spincluster/dynamics.hpp"
#include "spincluster/errors.hpp"

using namespace spincluster;

namespace {

// Spin-1 matrices in the |1>, |0>, |-1> order, written out by hand.
struct Spin1 {
  oracle::Mat x, y, z;
  Spin1() : x(3, 3), y(3, 3), z(3, 3) {
    const double r = 1 / std::sqrt(2.0);
    const oracle::cd i(0, 1);
    x << 0, r, 0, r, 0, r, 0, r, 0;
    y << 0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0;
    z << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  }
};

oracle::Mat kron3(const oracle::Mat& a, const oracle::Mat& b) {
  oracle::Mat out(9, 9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.block(3 * r, 3 * c, 3, 3) = a(r, c) * b;
  return out;
}

// Direct three-population master equation: dp_i/dt = sum_j (W_ji p_j - W_ij p_i).
std::array<double, 3> master_rhs(const RateTable& w, const std::array<double, 3>& p) {
  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) d[i] += w.w[j][i] * p[j] - w.w[i][j] * p[i];
  return d;
}

RateTable random_rates() {
  RateTable t;
  for (auto& row : t.w)
    for (double& x : row) x = oracle::uniform(0, 3);
  for (int i = 0; i < 3; ++i) t.w[i][i] = 0;
  return t;
}

std::array<double, 3> random_populations() {
  std::array<double, 3> p{oracle::uniform(0, 1), oracle::uniform(0, 1), oracle::uniform(0, 1)};
  const double z = p[0] + p[1] + p[2];
  for (double& x : p) x /= z;
  return p;
}

FieldProfile constant_field(double B, double t_end) {
  FieldProfile f;
  f.kind = FieldKind::constant;
  f.amplitude = B;
  f.t_end = t_end;
  return f;
}

}  // namespace

TEST_CASE("transition rate") {
  CHECK(transition_rate(1, 1, 0) == 0.0);
  CHECK(transition_rate(2, 1, 1) == doctest::Approx(2 / (1 - std::exp(-1.0))).epsilon(1e-14));
  // Small gaps: W ~ A delta^2 / beta.
  CHECK(transition_rate(1, 2, 1e-6) == doctest::Approx(1e-12 / 2).epsilon(1e-5));
  for (int trial = 0; trial < 50; ++trial) {
    const double A = oracle::uniform(0.1, 3), b = oracle::uniform(0.1, 3), d = oracle::uniform(-4, 4);
    const double up = transition_rate(A, b, d), down = transition_rate(A, b, -d);
    CHECK(up >= 0);
    CHECK(up == doctest::Approx(down * std::exp(b * d)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(transition_rate(0, 1, 1), DomainError);
  CHECK_THROWS_AS(transition_rate(1, -1, 1), DomainError);
}

TEST_CASE("rates between Zeeman levels obey detailed balance") {
  RateParams p;
  p.inv_temp = 0.7;
  const RateTable w = rates_for_spacing(p, 1.3);
  using L = ZeemanLevel;
  // Energies 1.3 N: going + -> 0 releases 1.3.
  CHECK(w(L::plus, L::zero) == doctest::Approx(transition_rate(1, 0.7, 1.3)));
  CHECK(w(L::plus, L::minus) == doctest::Approx(transition_rate(1, 0.7, 2.6)));
  CHECK(w(L::plus, L::plus) == 0.0);
  const auto eq = equilibrium_populations(1.3, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(eq[i] * w.w[i][j] == doctest::Approx(eq[j] * w.w[j][i]).epsilon(1e-12));
}

TEST_CASE("derived coefficients reproduce the three-population master equation") {
  for (int trial = 0; trial < 100; ++trial) {
    const RateTable w = random_rates();
    const auto p = random_populations();
    const auto d = master_rhs(w, p);
    const BlochCoefficients c = rate_matrix_coefficients(w, CoefficientMode::derived);
    const double x = p[0] - p[2], r0 = p[1];
    CHECK(c.C1 * x + c.C2 * r0 + c.E == doctest::Approx(d[0] - d[2]).epsilon(1e-12));
    CHECK(c.C3 * x + c.C4 * r0 + c.F == doctest::Approx(d[1]).epsilon(1e-12));

    const BlochCoefficients v = rate_matrix_coefficients(w, CoefficientMode::paper_verbatim);
    CHECK(v.C1 - c.C1 == doctest::Approx(w(ZeemanLevel::plus, ZeemanLevel::zero)).epsilon(1e-12));
    CHECK(v.C2 == c.C2);
    CHECK(v.C3 == c.C3);
    CHECK(v.C4 == c.C4);
    CHECK(v.E == c.E);
    CHECK(v.F == c.F);
  }
  RateTable bad;
  bad.w[0][1] = -1;
  CHECK_THROWS_AS(rate_matrix_coefficients(bad, CoefficientMode::derived), DomainError);
}

TEST_CASE("Boltzmann populations are the fixed point of the derived equations") {
  for (int trial = 0; trial < 30; ++trial) {
    RateParams p;
    p.inv_temp = oracle::uniform(0.2, 3);
    p.gamma = oracle::uniform(0.5, 2) * (trial % 2 ? 1 : -1);
    const double B = oracle::uniform(-3, 3);
    const auto eq = equilibrium_populations(B, p);
    CHECK(eq[0] + eq[1] + eq[2] == doctest::Approx(1.0));
    CHECK(eq[0] / eq[1] == doctest::Approx(std::exp(-p.inv_temp * p.gamma * B)).epsilon(1e-12));
    const auto d = master_rhs(rates_for_spacing(p, p.gamma * B), eq);
    for (double v : d) CHECK(std::abs(v) < 1e-12);
    const BlochCoefficients c = rate_matrix_coefficients(rates_for_spacing(p, p.gamma * B), CoefficientMode::derived);
    CHECK(std::abs(c.C1 * (eq[0] - eq[2]) + c.C2 * eq[1] + c.E) < 1e-12);
  }
  CHECK_THROWS_AS(equilibrium_populations(1, RateParams{1, 1, 0, 0}), DomainError);
}

TEST_CASE("nine-level Hamiltonian against a hand-built spin-1 pair") {
  const Spin1 s;
  const oracle::Mat id = oracle::Mat::Identity(3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const double B = oracle::uniform(-3, 3), D = oracle::uniform(0, 2), g = oracle::uniform(0.5, 2);
    const oracle::Mat ref = g * B * (kron3(s.z, id) + kron3(id, s.z)) + D * (kron3(s.z, s.x) - kron3(s.x, s.z));
    CHECK(max_abs(coupled_spin1_hamiltonian(B, D, g) - ref) < 1e-14);
  }
}

TEST_CASE("nine-level closed forms") {
  SUBCASE("the corrected reading matches every level") {
    std::vector<double> grid;
    for (int k = 0; k <= 40; ++k) grid.push_back(-5 + 0.25 * k);
    for (double D : {0.5, 1.0, 2.0}) {
      const LevelComparisonReport r = coupled_levels_report(grid, D, 1.0);
      CHECK(r.max_eigen_residual < 1e-10);
      CHECK(r.asserted_ok);
      for (double v : r.max_corrected_discrepancy) CHECK(v < 1e-9);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto h = coupled_spin1_hamiltonian(grid[k], D, 1.0);
        std::vector<double> closed(r.corrected[k].begin(), r.corrected[k].end());
        CHECK(oracle::sorted_gap(closed, oracle::eigenvalues(h)) < 1e-9);
      }
    }
  }
  SUBCASE("the two readings agree at Delta = 1 and differ elsewhere") {
    const NineLevelFormulas a = nine_level_formulas(0.7, 1.0, 1.0);
    for (int i = 0; i < 9; ++i) CHECK(a.printed[i] == doctest::Approx(a.corrected[i]).epsilon(1e-14));
    const NineLevelFormulas b = nine_level_formulas(0.7, 0.5, 1.0);
    CHECK(std::abs(b.printed[8] - b.corrected[8]) > 1e-3);
    CHECK(b.printed[3] == 0.0);
  }
  SUBCASE("B = 0 leaves a two-fold spectrum") {
    const NineLevelFormulas f = nine_level_formulas(0, 1, 1);
    CHECK(f.corrected[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(f.corrected[1] == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(coupled_levels_report({}, 1, 1), DomainError);
}

TEST_CASE("three-level avoided crossing") {
  for (int trial = 0; trial < 30; ++trial) {
    const double B = oracle::uniform(-4, 4), D = oracle::uniform(0, 2);
    const ThreeLevel t = lzs_three_level(B, D);
    const double r = std::hypot(B, D);
    CHECK(std::cos(t.beta) == doctest::Approx(B / r));
    const Eigen::Vector3d expect(r, 0, -r);
    for (int c = 0; c < 3; ++c)
      CHECK((t.hamiltonian * t.eigenvectors.col(c) - expect(c) * t.eigenvectors.col(c)).norm() < 1e-12);
    CHECK((t.eigenvectors.transpose() * t.eigenvectors - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(t.eigenvalues(0) == doctest::Approx(-r));
  }
  // Far from the crossing the adiabatic states are the Zeeman states.
  const ThreeLevel far = lzs_three_level(1e6, 1e-3);
  CHECK(far.eigenvectors(0, 0) == doctest::Approx(1.0));
  CHECK(far.eigenvectors(2, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lzs_three_level(0, 0), DomainError);
  CHECK_THROWS_AS(lzs_three_level(1, -1), DomainError);
}

TEST_CASE("integrator: equilibrium is preserved at constant field") {
  RateParams p;
  const Trajectory t = integrate_magnetization(p, constant_field(1.5, 5), InitialCondition::equilibrium(), 500,
                                               LzsMode::off);
  REQUIRE(t.rows.size() == 501);
  const auto eq = equilibrium_populations(1.5, p);
  for (const TrajectoryRow& r : t.rows) {
    CHECK(r.M_norm == doctest::Approx(eq[2] - eq[0]).epsilon(1e-10));
    CHECK(r.rho00 == doctest::Approx(eq[1]).epsilon(1e-10));
  }
  CHECK(t.rows.back().t == 5.0);
}

TEST_CASE("integrator: relaxation towards Boltzmann") {
  RateParams p;
  p.gamma = -2;
  const Trajectory t = integrate_magnetization(p, constant_field(0.8, 30), InitialCondition::polarized_up(), 3000,
                                               LzsMode::off);
  const auto eq = equilibrium_populations(0.8, p);
  CHECK(t.rows.front().M_norm == doctest::Approx(1.0));  // M = -gamma x, x = 1
  CHECK(t.rows.back().n == doctest::Approx(eq[2] - eq[0]).epsilon(1e-8));
  CHECK(t.rows.back().M_norm == doctest::Approx(-(eq[2] - eq[0])).epsilon(1e-8));
  CHECK(t.max_population_violation <= kStabilityMargin);
  CHECK(t.max_abs_m() <= 1.0 + 1e-12);
}

TEST_CASE("integrator: fourth-order convergence") {
  RateParams p;
  FieldProfile f;
  f.amplitude = 2;
  f.t_end = 3;
  const auto run = [&](int n) {
    return integrate_magnetization(p, f, InitialCondition::explicit_state(0.2, 0.3), n, LzsMode::adiabatic)
        .rows.back()
        .M_norm;
  };
  const double e1 = std::abs(run(100) - run(1600)), e2 = std::abs(run(200) - run(1600));
  CHECK(e1 / e2 > 12);
}

TEST_CASE("integrator: vanishing gap reduces the adiabatic picture to the Zeeman one") {
  RateParams p;
  p.delta_gap = 0;
  for (double B : {-2.0, 1.0}) {
    const auto off = integrate_magnetization(p, constant_field(B, 4), InitialCondition::explicit_state(0.3, 0.1), 400,
                                             LzsMode::off);
    // The adiabatic + level is the Zeeman - level when B < 0.
    const double n0 = B < 0 ? -0.3 : 0.3;
    const auto ad = integrate_magnetization(p, constant_field(B, 4), InitialCondition::explicit_state(n0, 0.1), 400,
                                            LzsMode::adiabatic);
    for (std::size_t i = 0; i < off.rows.size(); ++i) {
      CHECK(ad.rows[i].M_norm == doctest::Approx(off.rows[i].M_norm).epsilon(1e-12));
      CHECK(ad.rows[i].rho00 == doctest::Approx(off.rows[i].rho00).epsilon(1e-12));
    }
  }
}

TEST_CASE("integrator: a sweep through zero field traces a hysteresis loop") {
  RateParams p;
  FieldProfile f;
  f.t_end = 4 * std::numbers::pi;
  const Trajectory t = integrate_magnetization(p, f, InitialCondition::equilibrium(), 200000, LzsMode::off);
  const std::size_t half = t.rows.size() / 2;
  CHECK(std::abs(t.rows[half].M_norm - t.rows.back().M_norm) < 1e-3);
  CHECK(std::abs(loop_area(t, f.amplitude, half, t.rows.size())) > 0.1);
  CHECK(t.max_abs_m() <= 1.0);
  CHECK_THROWS_AS(loop_area(t, 1, 5, 5), DomainError);
  CHECK_THROWS_AS(loop_area(t, 1, 0, t.rows.size() + 1), DomainError);
}

TEST_CASE("integrator: errors") {
  RateParams p;
  FieldProfile f;
  CHECK_THROWS_AS(integrate_magnetization(p, f, InitialCondition::equilibrium(), 200, LzsMode::off), NumericalError);
  CHECK_THROWS_AS(integrate_magnetization(p, f, InitialCondition::equilibrium(), 9, LzsMode::off), DomainError);
  CHECK_THROWS_AS(integrate_magnetization(p, f, InitialCondition::explicit_state(0.5, 0.8), 100, LzsMode::off),
                  DomainError);
  f.t_end = f.t_start;
  CHECK_THROWS_AS(integrate_magnetization(p, f, InitialCondition::equilibrium(), 100, LzsMode::off), DomainError);
  RateParams bad;
  bad.A = 0;
  CHECK_THROWS_AS(integrate_magnetization(bad, FieldProfile{}, InitialCondition::equilibrium(), 100, LzsMode::off),
                  DomainError);
  CHECK_THROWS_AS(field_kind_from_string("square"), DomainError);
  CHECK(coefficient_mode_from_string(to_string(CoefficientMode::paper_verbatim)) == CoefficientMode::paper_verbatim);
  CHECK(lzs_mode_from_string("adiabatic") == LzsMode::adiabatic);
  CHECK(field_kind_from_string(to_string(FieldKind::linear_ramp)) == FieldKind::linear_ramp);
}

TEST_CASE("rho00 is identical in both pictures at zero gap and constant field") {
  RateParams p;
  p.delta_gap = 0;
  CHECK(rho00_mode_difference(p, constant_field(1.0, 2), InitialCondition::equilibrium(), 200) < 1e-12);
}
