#pragma once
#include "qlc/energy.hpp"
#include "qlc/material.hpp"
#include "qlc/qtensor.hpp"

namespace qlc {

struct ProjectionResult {
  QTensor pi_Q;     // nearest point on S_*
  Vec3 director;    // unit top eigenvector, largest |entry| positive
  double distance;  // |Q - pi_Q| Frobenius
  Mat3 rotation;    // R with R^T pi_Q R = diag(-s/3, -s/3, 2s/3), third column = director
  bool in_S_delta;  // distance <= 0.1 s_plus and top eigenvalue gap >= 0.5 s_plus
};

// Nearest-point projection onto S_*. Never throws; a degenerate top eigenvalue is
// reported through in_S_delta = false (the tie-broken director is still returned).
ProjectionResult project_pi(const QTensor& Q, const BulkConstants& bc);

// Diagonalizing rotation with the fixed gauge (first column: normalized projection of a
// reference axis onto the director-orthogonal plane). Throws std::domain_error off S_delta.
Mat3 rotation_RQ(const QTensor& Q, const BulkConstants& bc);

double dist_to_uniaxial(const QTensor& Q, const BulkConstants& bc);

// max(|g_B(Q~)_13|, |g_B(Q~)_23|) where Q~ = R^T Q R; vanishes by the block structure
double gB_block_identity_check(const QTensor& Q, const BulkConstants& bc);

// pointwise residual of the decomposition identity
//   <Q, A> = (3/s+) <Q^2, A> - (2 s+/3) |grad Q|^2,  A_lk = <d_l Q, d_k Q>,
// valid on S_*; returns |LHS - RHS|
double third_identity_residual_point(const QTensor& Q, const GradQ& G, double s_plus);

// directional derivative of project_pi by central differences (verification helper)
Mat3 dpi_fd(const QTensor& Q, const Mat3& xi, const BulkConstants& bc);

// pointwise uniaxial molecular field: the variational field of f_E constrained to S_*,
// equal to the tangential projection of sym0(sum_k d_k P[k] - df_E/dQ) at each point,
// assembled in divergence form. With B = Q + (s+/3) I and p[k] = sym P[k], the flux is
//   M1[k] = (1/s+) (p[k] B + B p[k] - (2/s+) <B, p[k]> B);
// uniaxial_flux_m1 provides it pointwise, the caller differentiates it on the grid, and
// uniaxial_H_local subtracts the chain-rule remainders acting on the B-dependent factors.
Mat3 uniaxial_flux_m1(const MaterialConstants& mc, const QTensor& Q, const GradQ& G, int k);
Mat3 uniaxial_H_local(const MaterialConstants& mc, const QTensor& Q, const GradQ& G, const Mat3& div_m1);

}  // namespace qlc
