#pragma once

// Hand-transcribed states and Q-action tables for the 3- and 4-spin clusters,
// in the SpinRegister basis convention (site 0 leftmost, 0 = up).
//
// Transcription notes:
//  * The S = 1/2 "symmetric-pair" triangle state is antisymmetric in sites 1,2:
//    (|udd> - |dud>)/sqrt(2). A symmetric combination would not be S = 1/2.
//  * Action tables list, for each basis state |a>, the coefficient of |b> as
//    the matrix element <a|Q|b> (row a, column b).
//  * Q is real with Q^T = Q(-u), so each entry below the diagonal equals the
//    mirrored entry above it evaluated at -u.
//  * In the 4-spin table the S = 1 mixing between phi^1 and phi^3 carries
//    (u1 + u2 - 2), not (u1 - u2 - 2).

#include "spincluster/spin_ops.hpp"
#include "spincluster/yangian.hpp"

namespace spincluster::reference {

// Triangle (3 sites), S = 1/2, m = -1/2 eigenstates of Q at u = 0.
StateVector triangle_phi_alpha();  // q = -1/4
StateVector triangle_phi_beta();   // q = -9/4

// Triangle angular-momentum basis at m = -1/2: {phi_{3/2}, phi', phi}.
struct TriangleLieBasis {
  StateVector quartet;  // S = 3/2
  StateVector prime;    // S = 1/2, site 3 distinguished
  StateVector pair;     // S = 1/2, singlet on sites 1,2
};
TriangleLieBasis triangle_lie_basis();

// 3x3 table of <a|Q|b> over (quartet, prime, pair) as closed forms in u.
Eigen::Matrix3d triangle_q_action(const YangianWeights& w);

// Tetramer (4 sites) angular-momentum basis: S = 2 and S = 1 at m = -1,
// S = 0 at m = 0.
struct TetramerLieBasis {
  StateVector quintet;  // phi_{2,-1}
  StateVector triplet1, triplet2, triplet3;  // phi^{1,2,3}_{1,-1}
  StateVector singlet1, singlet2;            // phi^{1,2}_{0,0}
};
TetramerLieBasis tetramer_lie_basis();

// Closed-form <a|Q|b> blocks: 1x1 quintet, 3x3 triplet, 2x2 singlet.
struct TetramerQAction {
  double quintet = 0.0;
  Eigen::Matrix3d triplet;
  Eigen::Matrix2d singlet;
};
TetramerQAction tetramer_q_action(const YangianWeights& w);

// Tetramer eigenstates of Q and of the parallelogram Hamiltonian.
StateVector tetramer_quintet_lowest();  // |dddd>, S = 2, m = -2
// psi^k_{1,-1} for k = 1, 2, 3. k = 1 and k = 3 share q = -1/2; k = 2 has
// q = -11/2. psi^3 is the S = 1 ground state of the parallelogram.
StateVector tetramer_triplet(int k);
StateVector tetramer_singlet_plus();   // q = -1
StateVector tetramer_singlet_minus();  // q = -3

// Apply the total raising operator `steps` times and renormalize.
StateVector raise(const SpinRegister& reg, const StateVector& v, int steps = 1);

}  // namespace spincluster::reference
