#include "spincluster/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spincluster/errors.hpp"
#include "spincluster/reference_states.hpp"
#include "spincluster/yangian.hpp"

namespace spincluster {

CouplingSet::CouplingSet(int n_sites) : CouplingSet(n_sites, std::vector<double>(pair_count(n_sites), 0.0)) {}

CouplingSet::CouplingSet(int n_sites, std::vector<double> values)
    : n_sites_(n_sites), values_(std::move(values)) {
  if (n_sites < 2) throw DomainError("CouplingSet: need at least two sites");
  if (values_.size() != pair_count(n_sites)) {
    throw DomainError("CouplingSet: expected " + std::to_string(pair_count(n_sites)) + " values, got " +
                      std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("CouplingSet: exchange constants must be finite");
  }
}

std::size_t CouplingSet::index_of(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_sites_ || i == j) {
    throw DomainError("CouplingSet: invalid pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  // Pairs starting at rows 0..i-1 come first.
  return static_cast<std::size_t>(i * (2 * n_sites_ - i - 1) / 2 + (j - i - 1));
}

double CouplingSet::at(int i, int j) const { return values_[index_of(i, j)]; }

void CouplingSet::set(int i, int j, double value) {
  if (!std::isfinite(value)) throw DomainError("CouplingSet: exchange constants must be finite");
  values_[index_of(i, j)] = value;
}

std::pair<int, int> CouplingSet::pair(std::size_t index) const {
  for (int i = 0; i < n_sites_; ++i)
    for (int j = i + 1; j < n_sites_; ++j)
      if (index_of(i, j) == index) return {i, j};
  throw DomainError("CouplingSet: pair index out of range");
}

std::string CouplingSet::pair_name(std::size_t index) const {
  const auto [i, j] = pair(index);
  return std::to_string(i + 1) + std::to_string(j + 1);
}

OperatorMatrix heisenberg_hamiltonian(const SpinRegister& reg, const CouplingSet& couplings) {
  if (couplings.n_sites() != reg.n_sites()) {
    throw DomainError("heisenberg_hamiltonian: coupling set is for " + std::to_string(couplings.n_sites()) +
                      " sites, register has " + std::to_string(reg.n_sites()));
  }
  const Eigen::Index d = reg.dimension();
  OperatorMatrix h = OperatorMatrix::Zero(d, d);
  for (std::size_t p = 0; p < couplings.size(); ++p) {
    const double a = couplings.values()[p];
    if (a == 0.0) continue;
    const auto [i, j] = couplings.pair(p);
    h += a * spin_dot(reg, i, j);
  }
  return h;
}

CouplingFamily commutant_family(const SpinRegister& reg, const OperatorMatrix& q, double tol) {
  if (q.rows() != reg.dimension() || q.cols() != reg.dimension()) {
    throw DomainError("commutant_family: operator dimension does not match register");
  }
  const double defect = hermiticity_defect(q);
  if (defect > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "commutant_family: operator is not Hermitian (defect " << defect << ")";
    throw PreconditionError(msg.str());
  }
  if (reg.n_sites() < 2) throw DomainError("commutant_family: need at least two sites");

  const int n = reg.n_sites();
  const std::size_t n_pairs = CouplingSet::pair_count(n);
  const Eigen::Index d2 = static_cast<Eigen::Index>(reg.dimension()) * reg.dimension();

  // The map is real-linear in a; stack real and imaginary parts.
  Eigen::MatrixXd coeff(2 * d2, static_cast<Eigen::Index>(n_pairs));
  CouplingSet probe(n);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const auto [i, j] = probe.pair(p);
    const OperatorMatrix c = commutator(q, spin_dot(reg, i, j));
    const Eigen::Map<const Eigen::VectorXcd> flat(c.data(), d2);
    coeff.col(static_cast<Eigen::Index>(p)) << flat.real(), flat.imag();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coeff, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  CouplingFamily family;
  family.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const bool null = c >= sv.size() || sv(c) <= cutoff;
    if (!null) continue;
    Eigen::VectorXd col = v.col(c);
    Eigen::Index pivot = 0;
    col.cwiseAbs().maxCoeff(&pivot);
    if (col(pivot) < 0) col = -col;
    CouplingSet member(n, std::vector<double>(col.data(), col.data() + col.size()));
    const double residual = max_abs(commutator(q, heisenberg_hamiltonian(reg, member)));
    family.max_commutator_residual = std::max(family.max_commutator_residual, residual);
    family.basis.push_back(std::move(member));
  }
  family.dimension = static_cast<int>(family.basis.size());
  return family;
}

double distance_from_family(const CouplingFamily& family, const CouplingSet& couplings) {
  Eigen::Map<const Eigen::VectorXd> a(couplings.values().data(),
                                      static_cast<Eigen::Index>(couplings.size()));
  Eigen::VectorXd rest = a;
  for (const CouplingSet& b : family.basis) {
    if (b.size() != couplings.size()) throw DomainError("distance_from_family: size mismatch");
    Eigen::Map<const Eigen::VectorXd> bv(b.values().data(), static_cast<Eigen::Index>(b.size()));
    rest -= bv.dot(a) * bv;
  }
  return rest.norm();
}

CouplingSet constrained_couplings_triangle(double j12, double j13) {
  CouplingSet c(3);
  c.set(0, 1, j12);
  c.set(1, 2, j12);
  c.set(0, 2, j13);
  return c;
}

CouplingSet constrained_couplings_parallelogram(double a12, double a34, double a13) {
  CouplingSet c(4);
  c.set(0, 1, a12);
  c.set(2, 3, a34);
  c.set(0, 2, a13);
  c.set(1, 3, (a12 + 2 * a13 - a34) / 2);
  c.set(0, 3, (a12 + 2 * a13) / 3);
  c.set(1, 2, (2 * a12 - 2 * a13 + 3 * a34) / 3);
  return c;
}

CouplingSet parallelogram_couplings(double a12, double a13) {
  return constrained_couplings_parallelogram(a12, a12, a13);
}

MixingAngle extract_mixing_theta(const SpinRegister& reg, const CouplingSet& couplings) {
  if (reg.n_sites() != 4) throw DomainError("extract_mixing_theta: requires a 4-site register");
  const OperatorMatrix h = heisenberg_hamiltonian(reg, couplings);
  const OperatorMatrix q = build_q(reg, YangianWeights::zeros(4));
  const double comm = max_abs(commutator(q, h));
  if (comm > kCommutantMembershipTolerance) {
    std::ostringstream msg;
    msg << "extract_mixing_theta: couplings are not in the commutant (||[Q,H]||_max = " << comm << ")";
    throw PreconditionError(msg.str());
  }

  StateVector v1 = reference::tetramer_triplet(1);
  StateVector v3 = reference::tetramer_triplet(3);
  MixingAngle out;
  for (int step = 0; step < 3; ++step) {
    if (step > 0) {
      v1 = reference::raise(reg, v1);
      v3 = reference::raise(reg, v3);
    }
    const double h11 = v1.dot(h * v1).real();
    const double h33 = v3.dot(h * v3).real();
    const double h13 = v1.dot(h * v3).real();
    const double leak = (h * v1 - h11 * v1 - h13 * v3).norm();
    if (leak > kCommutantMembershipTolerance) {
      throw NumericalError("extract_mixing_theta: H does not preserve the degenerate S = 1 block");
    }
    if (step == 0) {
      out.h11 = h11;
      out.h33 = h33;
      out.h13 = h13;
    } else {
      out.m_spread = std::max({out.m_spread, std::abs(h11 - out.h11), std::abs(h33 - out.h33),
                               std::abs(h13 - out.h13)});
    }
  }
  if (out.m_spread > kEigenResidualTolerance) {
    throw NumericalError("extract_mixing_theta: block depends on m (spread " + std::to_string(out.m_spread) + ")");
  }

  constexpr double pi = std::numbers::pi;
  double theta = std::atan2(-2.0 * out.h13, out.h11 - out.h33);
  if (theta > pi / 2) theta -= pi;
  if (theta <= -pi / 2) theta += pi;
  out.theta = theta;
  out.rotated_offdiagonal = 0.5 * std::sin(theta) * (out.h11 - out.h33) + std::cos(theta) * out.h13;
  return out;
}

double reference_mixing_relation(double a12, double a34, double a13, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return c * c * (a12 - a34) / 2 + s * s * 2.5 * (a12 - a34) +
         0.5 * std::sin(theta) * (-2.0 / 3 * a12 - 2 * a34 + 8.0 / 3 * a13);
}

double reference_mixing_relation_min(double a12, double a34, double a13) {
  const double x = (a12 - a34) / 2;
  const double k = -2.0 / 3 * a12 - 2 * a34 + 8.0 / 3 * a13;
  return std::max(0.0, std::abs(3 * x) - std::sqrt(4 * x * x + k * k / 4));
}

}  // namespace spincluster
