#pragma once
#include "qlc/material.hpp"
#include "qlc/qtensor.hpp"

namespace qlc {

// gradient stack at a point: g[k](i,j) = d_k Q_ij
struct GradQ {
  Mat3 g[3];
};

inline double grad_sq(const GradQ& G) {
  return frobenius(G.g[0], G.g[0]) + frobenius(G.g[1], G.g[1]) + frobenius(G.g[2], G.g[2]);
}

// original four-constant distortion density (not coercive for L4 != 0 off S_*)
double f_LG_density(const ElasticConstants& el, const Mat3& Q, const GradQ& G);

// repaired distortion density: equals f_LG on S_*, coercive on S_delta for admissible constants
double f_E_density(const MaterialConstants& mc, const Mat3& Q, const GradQ& G);

// quartic bulk density and its nonnegative shift f_B = f_tilde - f_tilde_min
double f_B_tilde_density(const BulkConstants& bc, const Mat3& Q);
double f_B_density(const BulkConstants& bc, const Mat3& Q);

// bulk force: aQ + b(Q^2 - (|Q|^2/3) I) - c |Q|^2 Q  (symmetric traceless)
Mat3 g_B(const BulkConstants& bc, const Mat3& Q);

// Hessian of the bulk density at Q, as an operator on symmetric traceless directions:
//   entry(i,j,k,l) = -a d_ik d_jl - b (d_kj Q_li + d_li Q_jk) + c (d_ik d_jl |Q|^2 + 2 Q_ij Q_kl)
struct HessianFB {
  double a, b, c;
  Mat3 Q;
  double q2;
  double entry(int i, int j, int k, int l) const {
    double v = c * 2.0 * Q[i][j] * Q[k][l];
    if (i == k && j == l) v += -a + c * q2;
    if (k == j) v += -b * Q[l][i];
    if (l == i) v += -b * Q[j][k];
    return v;
  }
  Mat3 apply(const Mat3& xi) const {
    Mat3 r = (-a + c * q2) * xi;
    Mat3 qx = mul(Q, xi), xq = mul(xi, Q);
    r -= b * (qx + xq);
    r += (2.0 * c * frobenius(Q, xi)) * Q;
    return r;
  }
  double quadratic_form(const Mat3& xi) const { return frobenius(apply(xi), xi); }
};

HessianFB hessian_fB(const BulkConstants& bc, const Mat3& Q);

// dF/dp with p = grad Q: P[m](a,b) = df_E / d(d_m Q_ab), raw index form
GradQ elastic_dp(const MaterialConstants& mc, const Mat3& Q, const GradQ& G);

// df_E/dQ at fixed gradient (only the L4 weight depends on Q), raw index form
Mat3 elastic_dQ(const MaterialConstants& mc, const Mat3& Q, const GradQ& G);

// distortion stress: sigma_ij = - P[j](k,l) * d_i Q_kl  (first index = gradient direction)
Mat3 distortion_stress(const MaterialConstants& mc, const Mat3& Q, const GradQ& G);

struct EnergyBreakdown {
  double elastic = 0.0;
  double bulk_over_L = 0.0;
  double kinetic = 0.0;
  double total = 0.0;
};

}  // namespace qlc
