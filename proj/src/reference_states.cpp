#include "spincluster/reference_states.hpp"

#include <cmath>
#include <initializer_list>
#include <string_view>
#include <utility>

#include "spincluster/errors.hpp"

namespace spincluster::reference {

namespace {

using Term = std::pair<double, std::string_view>;

StateVector combine(int n, double scale, std::initializer_list<Term> terms) {
  const SpinRegister reg(n);
  StateVector v = StateVector::Zero(reg.dimension());
  for (const auto& [coef, spins] : terms) v += coef * product_state(reg, spins);
  return scale * v;
}

struct Weights4 {
  double u1, u2, u3, u4;
};

Weights4 unpack4(const YangianWeights& w) {
  if (w.u.size() != 4) throw DomainError("tetramer_q_action: expected 4 weights");
  return {w.u[0], w.u[1], w.u[2], w.u[3]};
}

// Entries on and above the diagonal, as transcribed.
Eigen::Matrix3d triplet_upper(const Weights4& u) {
  const double r2 = std::sqrt(2.0);
  const double sq = u.u1 * u.u1 + u.u2 * u.u2 + u.u3 * u.u3 + u.u4 * u.u4;
  const double w = u.u1 + u.u2 - u.u3 - u.u4;
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = 0.5 * sq - 4.5 + 0.25 * w * w;
  m(0, 1) = -(u.u1 - u.u2 + 1) * (u.u3 + u.u4 + 2) / r2;
  m(0, 2) = (u.u3 - u.u4 + 1) * (u.u1 + u.u2 - 2) / r2;
  m(1, 1) = 0.5 * std::pow(u.u3 + u.u4, 2) + 0.25 * std::pow(u.u3 - u.u4, 2) +
            0.75 * std::pow(u.u1 - u.u2, 2) - 1;
  m(1, 2) = 0.5 * (u.u1 - u.u2 - 1) * (u.u3 - u.u4 + 1);
  m(2, 2) = 0.5 * std::pow(u.u1 + u.u2, 2) + 0.25 * std::pow(u.u1 - u.u2, 2) +
            0.75 * std::pow(u.u3 - u.u4, 2) - 1;
  return m;
}

Eigen::Matrix2d singlet_upper(const Weights4& u) {
  const double w = u.u1 + u.u2 - u.u3 - u.u4;
  const double a = u.u1 - u.u2, b = u.u3 - u.u4;
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = 0.5 * (w - 2) * (w + 2) + 0.25 * (a * a + b * b - 2);
  m(0, 1) = -std::sqrt(3.0) / 2 * (a + 1) * (b + 1);
  m(1, 1) = 0.75 * (a * a + b * b - 2);
  return m;
}

template <typename Mat>
Mat fill_lower(Mat upper, const Mat& upper_neg) {
  for (Eigen::Index r = 0; r < upper.rows(); ++r)
    for (Eigen::Index c = 0; c < r; ++c) upper(r, c) = upper_neg(c, r);
  return upper;
}

}  // namespace

StateVector triangle_phi_alpha() {
  return combine(3, -1.0 / std::sqrt(6.0), {{1, "udd"}, {1, "ddu"}, {-2, "dud"}});
}

StateVector triangle_phi_beta() {
  return combine(3, 1.0 / std::sqrt(2.0), {{1, "udd"}, {-1, "ddu"}});
}

TriangleLieBasis triangle_lie_basis() {
  return {combine(3, 1.0 / std::sqrt(3.0), {{1, "udd"}, {1, "dud"}, {1, "ddu"}}),
          combine(3, 1.0 / std::sqrt(6.0), {{1, "udd"}, {1, "dud"}, {-2, "ddu"}}),
          combine(3, 1.0 / std::sqrt(2.0), {{1, "udd"}, {-1, "dud"}})};
}

Eigen::Matrix3d triangle_q_action(const YangianWeights& w) {
  if (w.u.size() != 3) throw DomainError("triangle_q_action: expected 3 weights");
  const double u1 = w.u[0], u2 = w.u[1], u3 = w.u[2];
  const double sq = u1 * u1 + u2 * u2 + u3 * u3;
  const double h = std::sqrt(3.0) / 2;
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = 0.75 * sq + 0.5 * (u1 * u2 + u2 * u3 + u1 * u3) - 1;
  m(1, 1) = 0.75 * sq + 0.5 * u1 * u2 - u2 * u3 - u1 * u3 - 1.75;
  m(1, 2) = -h * (u1 - u2 + 1) * (u3 + 1);
  m(2, 1) = -h * (u1 - u2 - 1) * (u3 - 1);
  m(2, 2) = 0.75 * (u1 - u2) * (u1 - u2) + 0.75 * u3 * u3 - 0.75;
  return m;
}

TetramerLieBasis tetramer_lie_basis() {
  const double r2 = 1.0 / std::sqrt(2.0);
  TetramerLieBasis b;
  b.quintet = combine(4, 0.5, {{1, "uddd"}, {1, "dudd"}, {1, "ddud"}, {1, "dddu"}});
  b.triplet1 = combine(4, 0.5, {{1, "uddd"}, {1, "dudd"}, {-1, "ddud"}, {-1, "dddu"}});
  b.triplet2 = combine(4, r2, {{1, "uddd"}, {-1, "dudd"}});
  b.triplet3 = combine(4, r2, {{1, "ddud"}, {-1, "dddu"}});
  b.singlet1 = combine(4, 1.0 / (2 * std::sqrt(3.0)),
                       {{2, "uudd"}, {2, "dduu"}, {-1, "udud"}, {-1, "dudu"}, {-1, "uddu"}, {-1, "duud"}});
  b.singlet2 = combine(4, 0.5, {{1, "udud"}, {1, "dudu"}, {-1, "uddu"}, {-1, "duud"}});
  return b;
}

TetramerQAction tetramer_q_action(const YangianWeights& w) {
  const Weights4 u = unpack4(w);
  const Weights4 neg{-u.u1, -u.u2, -u.u3, -u.u4};
  TetramerQAction out;
  const double s = u.u1 + u.u2 + u.u3 + u.u4;
  out.quintet = 0.375 * s * s + 0.25 * std::pow(u.u1 - u.u2, 2) - 2.5 +
                0.125 * std::pow(u.u1 + u.u2 - u.u3 - u.u4, 2) + 0.25 * std::pow(u.u3 - u.u4, 2);
  out.triplet = fill_lower(triplet_upper(u), triplet_upper(neg));
  out.singlet = fill_lower(singlet_upper(u), singlet_upper(neg));
  return out;
}

StateVector tetramer_quintet_lowest() { return combine(4, 1.0, {{1, "dddd"}}); }

StateVector tetramer_triplet(int k) {
  switch (k) {
    case 1: return combine(4, 0.5, {{-1, "uddd"}, {1, "dudd"}, {1, "ddud"}, {-1, "dddu"}});
    case 2:
      return combine(4, 1.0 / std::sqrt(20.0), {{3, "uddd"}, {1, "dudd"}, {-1, "ddud"}, {-3, "dddu"}});
    case 3:
      return combine(4, 1.0 / std::sqrt(20.0), {{1, "uddd"}, {-3, "dudd"}, {3, "ddud"}, {-1, "dddu"}});
    default: throw DomainError("tetramer_triplet: index must be 1, 2 or 3");
  }
}

StateVector tetramer_singlet_plus() {
  return combine(4, 1.0 / (2 * std::sqrt(3.0)),
                 {{1, "uudd"}, {1, "dduu"}, {-2, "udud"}, {-2, "dudu"}, {1, "uddu"}, {1, "duud"}});
}

StateVector tetramer_singlet_minus() {
  return combine(4, 0.5, {{-1, "uudd"}, {-1, "dduu"}, {1, "uddu"}, {1, "duud"}});
}

StateVector raise(const SpinRegister& reg, const StateVector& v, int steps) {
  const VectorOperator s = total_spin(reg);
  const OperatorMatrix up = s.x + Complex(0, 1) * s.y;
  StateVector out = v;
  for (int i = 0; i < steps; ++i) {
    out = up * out;
    const double norm = out.norm();
    if (norm < 1e-12) throw DomainError("raise: state is annihilated by S+");
    out /= norm;
  }
  return out;
}

}  // namespace spincluster::reference
