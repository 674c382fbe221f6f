#include "qlc/energy.hpp"

#include <algorithm>

namespace qlc {

namespace {

Vec3 div_vector(const GradQ& G) {
  // d_i = d_j Q_ij
  Vec3 d;
  for (int i = 0; i < 3; ++i) d[i] = G.g[0][i][0] + G.g[1][i][1] + G.g[2][i][2];
  return d;
}

double exchange_term(const GradQ& G) {
  // d_j Q_ik d_k Q_ij
  double s = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) s += G.g[j][i][k] * G.g[k][i][j];
  return s;
}

Mat3 gram(const GradQ& G) {
  // A_lk = <d_l Q, d_k Q>
  Mat3 a;
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) a[l][k] = frobenius(G.g[l], G.g[k]);
  return a;
}

}  // namespace

double f_LG_density(const ElasticConstants& el, const Mat3& Q, const GradQ& G) {
  Vec3 d = div_vector(G);
  double quad = 0.0;  // Q_lk d_l Q_ij d_k Q_ij
  Mat3 a = gram(G);
  quad = frobenius(Q, a);
  return 0.5 * el.L1 * grad_sq(G) + 0.5 * el.L2 * dot(d, d) + 0.5 * el.L3 * exchange_term(G) + 0.5 * el.L4 * quad;
}

double f_E_density(const MaterialConstants& mc, const Mat3& Q, const GradQ& G) {
  const ElasticConstants& el = mc.el;
  double sp = mc.bulk.s_plus;
  Vec3 d = div_vector(G);
  Mat3 a = gram(G);
  Mat3 q2 = mul(Q, Q);
  double quartic = frobenius(q2, a);
  if (el.L4 < 0.0) quartic -= frobenius(Q, Q) * trace(a);
  return 0.5 * el.L1_tilde * grad_sq(G) + 0.5 * el.L2 * dot(d, d) + 0.5 * el.L3 * exchange_term(G) +
         1.5 * el.L4 / sp * quartic;
}

double f_B_tilde_density(const BulkConstants& bc, const Mat3& Q) {
  double q2 = frobenius(Q, Q);
  double q3 = trace(mul(Q, mul(Q, Q)));
  return -0.5 * bc.a * q2 - bc.b / 3.0 * q3 + 0.25 * bc.c * q2 * q2;
}

double f_B_density(const BulkConstants& bc, const Mat3& Q) {
  // Clamp: the shifted density is nonnegative analytically, but rounding can
  // yield ~ -1e-17 at minimizers, which would break nonnegativity of the
  // integrated bulk term.
  return std::max(0.0, f_B_tilde_density(bc, Q) - bc.f_tilde_min);
}

Mat3 g_B(const BulkConstants& bc, const Mat3& Q) {
  double q2 = frobenius(Q, Q);
  Mat3 qq = mul(Q, Q);
  Mat3 r = bc.a * Q - bc.c * q2 * Q + bc.b * qq;
  double sh = bc.b * q2 / 3.0;
  r[0][0] -= sh;
  r[1][1] -= sh;
  r[2][2] -= sh;
  return r;
}

HessianFB hessian_fB(const BulkConstants& bc, const Mat3& Q) {
  return HessianFB{bc.a, bc.b, bc.c, Q, frobenius(Q, Q)};
}

GradQ elastic_dp(const MaterialConstants& mc, const Mat3& Q, const GradQ& G) {
  const ElasticConstants& el = mc.el;
  double sp = mc.bulk.s_plus;
  Vec3 d = div_vector(G);
  Mat3 q2 = mul(Q, Q);
  double c4 = 3.0 * el.L4 / sp;
  GradQ P;
  for (int m = 0; m < 3; ++m) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = el.L1_tilde * G.g[m][i][j];
        if (j == m) v += el.L2 * d[i];
        v += el.L3 * G.g[j][i][m];
        for (int k = 0; k < 3; ++k) v += c4 * q2[m][k] * G.g[k][i][j];
        if (el.L4 < 0.0) v -= c4 * frobenius(Q, Q) * G.g[m][i][j];
        P.g[m][i][j] = v;
      }
  }
  return P;
}

Mat3 elastic_dQ(const MaterialConstants& mc, const Mat3& Q, const GradQ& G) {
  const ElasticConstants& el = mc.el;
  if (el.L4 == 0.0) return Mat3{};
  double sp = mc.bulk.s_plus;
  Mat3 a = gram(G);
  Mat3 aq = mul(a, Q), qa = mul(Q, a);
  Mat3 r = (1.5 * el.L4 / sp) * (aq + qa);
  if (el.L4 < 0.0) r -= (3.0 * el.L4 / sp * trace(a)) * Q;
  return r;
}

Mat3 distortion_stress(const MaterialConstants& mc, const Mat3& Q, const GradQ& G) {
  GradQ P = elastic_dp(mc, Q, G);
  Mat3 sig;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sig[i][j] = -frobenius(P.g[j], G.g[i]);
  return sig;
}

}  // namespace qlc
