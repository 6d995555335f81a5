#include "spincluster/yangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spincluster/errors.hpp"

namespace spincluster {

namespace {

constexpr double kSpinSquare = 0.75;  // S_i^2 for spin 1/2

void require_weights(const SpinRegister& reg, const YangianWeights& w) {
  if (static_cast<int>(w.u.size()) != reg.n_sites()) {
    std::ostringstream msg;
    msg << "Yangian weights: expected " << reg.n_sites() << " entries, got " << w.u.size();
    throw DomainError(msg.str());
  }
}

int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) ? 1 : -1;
}

// Largest entrywise deviation from [A_a, B_b] = i eps_abc C_c.
double su2_residual(const VectorOperator& a, const VectorOperator& b, const VectorOperator& c) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      OperatorMatrix diff = commutator(a[kAxes[i]], b[kAxes[j]]);
      for (int k = 0; k < 3; ++k) {
        const int eps = levi_civita(i, j, k);
        if (eps != 0) diff -= Complex(0, eps) * c[kAxes[k]];
      }
      worst = std::max(worst, max_abs(diff));
    }
  }
  return worst;
}

Complex frobenius_inner(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a.adjoint() * b).trace();
}

}  // namespace

VectorOperator build_yangian(const SpinRegister& reg, const YangianWeights& w) {
  require_weights(reg, w);
  const int n = reg.n_sites();
  const Eigen::Index d = reg.dimension();
  VectorOperator y{OperatorMatrix::Zero(d, d), OperatorMatrix::Zero(d, d),
                   OperatorMatrix::Zero(d, d)};
  std::vector<VectorOperator> spins;
  spins.reserve(n);
  for (int k = 0; k < n; ++k) spins.push_back(site_spin(reg, k));

  for (int k = 0; k < n; ++k)
    for (Axis a : kAxes) y[a] += w.u[k] * spins[k][a];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (Axis a : kAxes) y[a] += Complex(0, 1) * cross_component(spins[i], spins[j], a);
    }
  }
  return y;
}

OperatorMatrix build_q(const SpinRegister& reg, const YangianWeights& w) {
  const VectorOperator y = build_yangian(reg, w);
  return dot(y, y);
}

OperatorMatrix expanded_q(const SpinRegister& reg, const YangianWeights& w) {
  require_weights(reg, w);
  const int n = reg.n_sites();
  if (n != 3 && n != 4) throw DomainError("expanded_q: only 3 and 4 sites are supported");
  const Eigen::Index d = reg.dimension();
  const OperatorMatrix id = OperatorMatrix::Identity(d, d);
  const std::vector<double>& u = w.u;
  const Complex two_i(0, 2);

  // 1-based helpers so the assembly reads like the textbook expansion.
  auto sd = [&](int i, int j) { return spin_dot(reg, i - 1, j - 1); };
  auto st = [&](int i, int j, int k) { return scalar_triple(reg, i - 1, j - 1, k - 1); };
  auto uu = [&](int i) { return u[i - 1]; };
  const double s2 = kSpinSquare;

  OperatorMatrix q = OperatorMatrix::Zero(d, d);
  double usq = 0.0;
  for (double x : u) usq += x * x;
  q += usq * s2 * id;

  if (n == 3) {
    const OperatorMatrix d12 = sd(1, 2), d23 = sd(2, 3), d13 = sd(1, 3);
    const OperatorMatrix p = d12 + d23 + d13;
    q += 2.0 * (uu(1) * uu(2) * d12 + uu(2) * uu(3) * d23 + uu(1) * uu(3) * d13);
    q += two_i * (uu(1) - uu(2) + uu(3)) * st(1, 2, 3);
    OperatorMatrix braces = 3.0 * s2 * s2 * id - p + 2.0 * s2 * d23 + 2.0 * s2 * d12 -
                            2.0 * s2 * d13 - p * p + 2.0 * (d12 * d23 + d23 * d12);
    q -= braces;
    return q;
  }

  OperatorMatrix p = OperatorMatrix::Zero(d, d);
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      const OperatorMatrix dij = sd(i, j);
      p += dij;
      q += 2.0 * uu(i) * uu(j) * dij;
    }
  }
  q += two_i * ((uu(1) - uu(2) + uu(3)) * st(1, 2, 3) + (uu(1) - uu(2) + uu(4)) * st(1, 2, 4) +
                (uu(1) - uu(3) + uu(4)) * st(1, 3, 4) + (uu(2) - uu(3) + uu(4)) * st(2, 3, 4));

  const OperatorMatrix d12 = sd(1, 2), d13 = sd(1, 3), d14 = sd(1, 4), d23 = sd(2, 3),
                       d24 = sd(2, 4), d34 = sd(3, 4);
  auto anti = [](const OperatorMatrix& a, const OperatorMatrix& b) -> OperatorMatrix {
    return a * b + b * a;
  };
  OperatorMatrix braces = 6.0 * s2 * s2 * id - p * p - p;
  braces += 2.0 * s2 * ((d23 + d24 + d34) + (d34 - d13 - d14) + (d12 - d14 - d24) + (d12 + d13 + d23));
  braces += 2.0 * anti(d23, d12) + 2.0 * anti(d24, d12) + 2.0 * anti(d34, d13) + 2.0 * anti(d34, d23);
  braces += 2.0 * (d13 * d24 - d14 * d23 + 3.0 * d12 * d34);
  q -= braces;
  return q;
}

std::vector<double> q_triple_coefficients(const YangianWeights& w, int n) {
  if (n != 3 && n != 4) throw DomainError("q_triple_coefficients: only 3 and 4 sites are supported");
  if (static_cast<int>(w.u.size()) != n) throw DomainError("q_triple_coefficients: weight count mismatch");
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) out.push_back(w.u[i] - w.u[j] + w.u[k]);
  return out;
}

bool q_hermiticity_condition(const YangianWeights& w, int n, double tol) {
  const std::vector<double> c = q_triple_coefficients(w, n);
  return std::all_of(c.begin(), c.end(), [tol](double x) { return std::abs(x) <= tol; });
}

AxiomReport check_yangian_axioms(const SpinRegister& reg, const YangianWeights& w) {
  const VectorOperator i_op = total_spin(reg);
  const VectorOperator y = build_yangian(reg, w);

  AxiomReport report;
  report.level_zero_residual = std::max(su2_residual(i_op, i_op, i_op), su2_residual(i_op, y, y));

  const Complex iu(0, 1);
  const OperatorMatrix jp = y.x + iu * y.y, jm = y.x - iu * y.y;
  const OperatorMatrix ip = i_op.x + iu * i_op.y, im = i_op.x - iu * i_op.y;
  const OperatorMatrix& j3 = y.z;
  const OperatorMatrix& i3 = i_op.z;

  const OperatorMatrix lhs_p = commutator(jp, commutator(j3, jp));
  const OperatorMatrix rhs_p = 0.25 * ip * (jp * i3 - ip * j3);
  const OperatorMatrix lhs_m = commutator(jm, commutator(j3, jm));
  const OperatorMatrix rhs_m = 0.25 * im * (jm * i3 - im * j3);

  const double denom = rhs_p.squaredNorm() + rhs_m.squaredNorm();
  report.lambda_identifiable = denom > 1e-24;
  if (report.lambda_identifiable) {
    report.fitted_lambda =
        (frobenius_inner(rhs_p, lhs_p) + frobenius_inner(rhs_m, lhs_m)).real() / denom;
  }
  report.serre_residual = std::max(max_abs(lhs_p - report.fitted_lambda * rhs_p),
                                   max_abs(lhs_m - report.fitted_lambda * rhs_m));
  report.serre_consistent = report.serre_residual < kSerreTolerance;
  return report;
}

std::vector<const LabeledState*> LabeledBasis::find(double S, double m, double q, double tol) const {
  std::vector<const LabeledState*> out;
  for (const LabeledState& s : states) {
    if (std::abs(s.S - S) < tol && std::abs(s.m - m) < tol && std::abs(s.q - q) < tol) {
      out.push_back(&s);
    }
  }
  return out;
}

LabeledBasis q_joint_labels(const SpinRegister& reg, const YangianWeights& w) {
  const OperatorMatrix q = build_q(reg, w);
  const double defect = hermiticity_defect(q);
  if (defect > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "q_joint_labels: Q is not Hermitian for these weights (defect " << defect << ")";
    throw PreconditionError(msg.str());
  }
  const OperatorMatrix s2 = total_spin_squared(reg);
  const OperatorMatrix sz = total_spin(reg).z;
  const int n = reg.n_sites();

  LabeledBasis basis;
  // S_z is diagonal in the product basis: sector = number of down spins.
  for (int downs = n; downs >= 0; --downs) {
    std::vector<int> idx;
    for (int b = 0; b < reg.dimension(); ++b) {
      int count = 0;
      for (int k = 0; k < n; ++k) count += reg.is_down(b, k);
      if (count == downs) idx.push_back(b);
    }
    const double m = 0.5 * n - downs;
    const Eigen::Index sd = static_cast<Eigen::Index>(idx.size());
    OperatorMatrix embed = OperatorMatrix::Zero(reg.dimension(), sd);
    for (Eigen::Index c = 0; c < sd; ++c) embed(idx[c], c) = 1.0;

    const Spectrum s_spec = hermitian_eig(embed.adjoint() * s2 * embed);
    for (const auto& group : s_spec.degeneracy_groups) {
      const double casimir = s_spec.eigenvalues(group.front());
      const double S = std::round(2.0 * (-0.5 + std::sqrt(0.25 + casimir))) / 2.0;
      OperatorMatrix v(sd, static_cast<Eigen::Index>(group.size()));
      for (std::size_t c = 0; c < group.size(); ++c) v.col(c) = s_spec.eigenvectors.col(group[c]);
      const OperatorMatrix full = embed * v;

      const Spectrum q_spec = hermitian_eig(full.adjoint() * q * full);
      for (const auto& qgroup : q_spec.degeneracy_groups) {
        for (int col : qgroup) {
          LabeledState st;
          st.vector = fix_phase(full * q_spec.eigenvectors.col(col));
          st.S = S;
          st.m = m;
          st.q = q_spec.eigenvalues(col);
          st.degenerate = qgroup.size() > 1;
          basis.states.push_back(std::move(st));
        }
      }
    }
  }

  for (const LabeledState& st : basis.states) {
    const double r_s2 = (s2 * st.vector - st.S * (st.S + 1) * st.vector).norm();
    const double r_sz = (sz * st.vector - st.m * st.vector).norm();
    const double r_q = (q * st.vector - st.q * st.vector).norm();
    if (std::max({r_s2, r_sz, r_q}) > kEigenResidualTolerance) {
      throw NumericalError("q_joint_labels: joint eigenvector residual too large");
    }
  }

  std::stable_sort(basis.states.begin(), basis.states.end(),
                   [](const LabeledState& a, const LabeledState& b) {
                     if (a.S != b.S) return a.S < b.S;
                     if (a.m != b.m) return a.m < b.m;
                     return a.q < b.q - kGroupingTolerance;
                   });
  return basis;
}

}  // namespace spincluster
