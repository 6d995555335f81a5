#include "spincluster/observables.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "spincluster/errors.hpp"

namespace spincluster {

namespace {

void require_normalized(const SpinRegister& reg, const StateVector& state, const char* who) {
  if (state.size() != reg.dimension()) {
    throw DomainError(std::string(who) + ": state dimension does not match register");
  }
  const double defect = std::abs(state.norm() - 1.0);
  if (defect > kNormTolerance) {
    std::ostringstream msg;
    msg << who << ": state is not normalized (| ||psi|| - 1 | = " << defect << ")";
    throw PreconditionError(msg.str());
  }
}

// Diagonal S_z expectation straight from the bit encoding.
double sz_expectation(const SpinRegister& reg, const StateVector& state, int site) {
  double acc = 0.0;
  for (int b = 0; b < reg.dimension(); ++b) {
    const double w = std::norm(state(b));
    acc += reg.is_down(b, site) ? -0.5 * w : 0.5 * w;
  }
  return acc;
}

}  // namespace

double MomentVector::sum() const { return std::accumulate(mu.begin(), mu.end(), 0.0); }

MomentVector local_moments(const SpinRegister& reg, const StateVector& state, double g) {
  require_normalized(reg, state, "local_moments");
  if (!std::isfinite(g)) throw DomainError("local_moments: g must be finite");
  MomentVector out;
  out.g = g;
  for (int k = 0; k < reg.n_sites(); ++k) {
    const double sz = sz_expectation(reg, state, k);
    out.mu.push_back(-g * sz);
    out.m_total += sz;
  }
  out.sum_rule_residual = std::abs(out.sum() + g * out.m_total);
  return out;
}

SpinLabels total_spin_labels(const SpinRegister& reg, const StateVector& state) {
  require_normalized(reg, state, "total_spin_labels");
  const OperatorMatrix s2 = total_spin_squared(reg);
  const OperatorMatrix sz = total_spin(reg).z;

  const double s2_val = state.dot(s2 * state).real();
  const double m_val = state.dot(sz * state).real();

  SpinLabels out;
  out.casimir_residual = (s2 * state - s2_val * state).norm();
  out.sz_residual = (sz * state - m_val * state).norm();
  if (out.casimir_residual > kSpinLabelTolerance || out.sz_residual > kSpinLabelTolerance) {
    std::ostringstream msg;
    msg << "total_spin_labels: not a spin eigenstate (S^2 residual " << out.casimir_residual
        << ", S_z residual " << out.sz_residual << ")";
    throw PreconditionError(msg.str());
  }
  // S(S+1) = x  =>  S = (-1 + sqrt(1 + 4x)) / 2, then snap to half-integers.
  const double s = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * s2_val)));
  out.S = std::round(2.0 * s) / 2.0;
  out.m = std::round(2.0 * m_val) / 2.0;
  return out;
}

double magnetization_expectation(const std::array<double, 3>& p, double scale) {
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < -kPopulationTolerance) {
      throw DomainError("magnetization_expectation: populations must be nonnegative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kPopulationTolerance) {
    throw DomainError("magnetization_expectation: populations must sum to 1");
  }
  return -scale * (p[0] - p[2]);
}

}  // namespace spincluster
