#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "spincluster/errors.hpp"
#include "spincluster/reference_states.hpp"
#include "spincluster/spectra.hpp"

using namespace spincluster;

namespace {

std::vector<double> expanded(const LevelSet& set) {
  std::vector<double> out;
  for (const Level& l : set.levels) out.insert(out.end(), l.multiplicity, l.energy);
  return out;
}

}  // namespace

TEST_CASE("triangle levels against exact diagonalization") {
  const LevelSet s = triangle_levels(65, 7);
  CHECK(s.total_multiplicity() == 8);
  CHECK(s.find("alpha").energy == doctest::Approx(-63.25));
  CHECK(s.find("beta").energy == doctest::Approx(-5.25));
  CHECK(s.find("quartet").energy == doctest::Approx(34.25));
  CHECK(std::abs(s.weighted_sum()) < 1e-12);
  CHECK(ground_levels(s).labels == std::vector<std::string>{"alpha"});

  for (int trial = 0; trial < 50; ++trial) {
    const double j12 = oracle::uniform(-5, 5), j13 = oracle::uniform(-5, 5);
    const auto h = oracle::heisenberg(3, {j12, j13, j12});
    CHECK(oracle::sorted_gap(expanded(triangle_levels(j12, j13)), oracle::eigenvalues(h)) < 1e-12);
    CHECK(level_discrepancy(triangle_levels(j12, j13), h) < 1e-12);
  }
}

TEST_CASE("parallelogram levels against exact diagonalization") {
  for (int trial = 0; trial < 100; ++trial) {
    const double a12 = oracle::uniform(-4, 4), a13 = oracle::uniform(-4, 4);
    // a14 = (a12 + 2 a13)/3, a23 = (5 a12 - 2 a13)/3, a24 = a13, a34 = a12.
    const std::vector<double> a = {a12, a13, (a12 + 2 * a13) / 3, (5 * a12 - 2 * a13) / 3, a13, a12};
    const LevelSet s = parallelogram_levels(a12, a13);
    CHECK(s.total_multiplicity() == 16);
    CHECK(std::abs(s.weighted_sum()) < 1e-12);
    CHECK(oracle::sorted_gap(expanded(s), oracle::eigenvalues(oracle::heisenberg(4, a))) < 1e-11);
  }
  CHECK_THROWS_AS(level_discrepancy(parallelogram_levels(1, 1), oracle::heisenberg(3, {1, 1, 1})), DomainError);
  CHECK_THROWS_AS(parallelogram_levels(1, 1).find("E_9"), DomainError);
}

TEST_CASE("levels are homogeneous of degree one") {
  for (int trial = 0; trial < 20; ++trial) {
    const double a12 = oracle::uniform(-3, 3), a13 = oracle::uniform(-3, 3), lam = oracle::uniform(-4, 4);
    const LevelSet base = parallelogram_levels(a12, a13), scaled = parallelogram_levels(lam * a12, lam * a13);
    for (std::size_t i = 0; i < base.levels.size(); ++i)
      CHECK(scaled.levels[i].energy == doctest::Approx(lam * base.levels[i].energy).epsilon(1e-12));
    if (lam > 0)
      CHECK(classify_ground(a12, a13).ground_labels == classify_ground(lam * a12, lam * a13).ground_labels);
  }
}

TEST_CASE("ground classification") {
  SUBCASE("default parallelogram has the S = 1 level E^3 lowest") {
    const PhasePoint p = classify_ground(1, -3);
    CHECK(p.ground_labels == std::vector<std::string>{"E^3"});
    REQUIRE(p.ground_S.has_value());
    CHECK(*p.ground_S == 1.0);
    CHECK(p.ground_energy == doctest::Approx(-23.0 / 6));
  }
  SUBCASE("ties between equal-S levels keep S") {
    const PhasePoint p = classify_ground(1, 1);
    CHECK(p.ground_labels == std::vector<std::string>{"E^+", "E^-"});
    REQUIRE(p.ground_S.has_value());
    CHECK(*p.ground_S == 0.0);
  }
  SUBCASE("ties across different S are reported as mixed") {
    const PhasePoint p = classify_ground(1, -2);
    CHECK(p.ground_labels == std::vector<std::string>{"E^3", "E^+"});
    CHECK_FALSE(p.ground_S.has_value());
  }
  SUBCASE("the zero Hamiltonian ties every level") {
    CHECK(classify_ground(0, 0).ground_labels.size() == 6);
  }
}

TEST_CASE("ground level agrees with a brute-force minimum over a grid") {
  for (const PhasePoint& p : phase_map({-2, 2}, {-2, 2}, 21)) {
    const LevelSet s = parallelogram_levels(p.a12, p.a13);
    double lowest = 1e300;
    for (const Level& l : s.levels) lowest = std::min(lowest, l.energy);
    CHECK(p.ground_energy == lowest);
    for (const std::string& label : p.ground_labels) CHECK(s.find(label).energy - lowest <= 1e-9 * 8);
    for (const Level& l : s.levels)
      if (l.energy - lowest > 1e-8) CHECK(std::find(p.ground_labels.begin(), p.ground_labels.end(), l.label) ==
                                          p.ground_labels.end());
  }
}

TEST_CASE("phase_map grid shape and errors") {
  const auto grid = phase_map({0.1, 2}, {-5, -0.1}, 7);
  CHECK(grid.size() == 49);
  CHECK(grid.front().a12 == 0.1);
  CHECK(grid.front().a13 == -5);
  CHECK(grid[1].a12 == 0.1);  // a13 runs fastest
  CHECK(grid.back().a12 == doctest::Approx(2));
  CHECK(grid.back().a13 == doctest::Approx(-0.1));
  CHECK(phase_map({1, 1}, {-1, 1}, 5).size() == 5);
  CHECK(phase_map({1, 1}, {2, 2}, 1).size() == 1);
  CHECK_THROWS_AS(phase_map({2, 1}, {0, 1}, 5), DomainError);
  CHECK_THROWS_AS(phase_map({0, 1}, {0, 1}, 1), DomainError);
  CHECK_THROWS_AS(phase_map({0, 1}, {0, 1}, 0), DomainError);
  CHECK_THROWS_AS(phase_map({0, INFINITY}, {0, 1}, 4), DomainError);
}

TEST_CASE("ordering report at the default couplings") {
  const OrderingReport r = ordering_report(1, -3);
  REQUIRE(r.link_holds.size() == 5);
  CHECK(r.ground_is_first);
  CHECK(r.link_holds[0]);
  CHECK(r.link_holds[1]);
  CHECK(r.link_holds[2]);
  // E^- = 9/2 sits above E^1 = 3/2 here, so the full chain does not hold.
  CHECK_FALSE(r.link_holds[3]);
  CHECK_FALSE(r.all_hold());
}

TEST_CASE("sector ground state") {
  const SpinRegister reg(4);
  const auto h = oracle::heisenberg(4, parallelogram_couplings(1, -3).values());
  const SectorGround g = ground_state_in_sector(reg, h, -1);
  CHECK(g.energy == doctest::Approx(-23.0 / 6));
  CHECK(g.gap > 0.1);
  CHECK(oracle::overlap(g.state, reference::tetramer_triplet(3)) == doctest::Approx(1).epsilon(1e-10));
  CHECK(std::abs(g.state.norm() - 1) < 1e-12);
  // Only kets with three down spins appear.
  for (int b = 0; b < 16; ++b)
    if (std::popcount(static_cast<unsigned>(b)) != 3) CHECK(std::abs(g.state(b)) == 0.0);

  const SectorGround top = ground_state_in_sector(reg, h, 2);
  CHECK(top.energy == doctest::Approx(-0.5));
  CHECK(std::isinf(top.gap));
  CHECK_THROWS_AS(ground_state_in_sector(reg, h, 0.5), DomainError);
  CHECK_THROWS_AS(ground_state_in_sector(reg, h, 3), DomainError);
  CHECK_THROWS_AS(ground_state_in_sector(SpinRegister(3), h, 0.5), DomainError);
}
