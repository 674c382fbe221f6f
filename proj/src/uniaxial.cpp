#include "qlc/uniaxial.hpp"

#include <cmath>
#include <stdexcept>

namespace qlc {

namespace {

Vec3 sign_normalized(Vec3 v) {
  int arg = 0;
  double best = std::fabs(v[0]);
  for (int i = 1; i < 3; ++i)
    if (std::fabs(v[i]) > best) {
      best = std::fabs(v[i]);
      arg = i;
    }
  if (v[arg] < 0.0)
    for (int i = 0; i < 3; ++i) v[i] = -v[i];
  return v;
}

Mat3 gauge_rotation(const Vec3& u) {
  Vec3 c1{{1.0 - u[0] * u[0], -u[0] * u[1], -u[0] * u[2]}};  // e1 projected off u
  if (norm(c1) < 1e-6) c1 = Vec3{{-u[1] * u[0], 1.0 - u[1] * u[1], -u[1] * u[2]}};
  c1 = normalized(c1);
  Vec3 c2 = cross(u, c1);
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    r[i][0] = c1[i];
    r[i][1] = c2[i];
    r[i][2] = u[i];
  }
  return r;
}

Mat3 b_tensor(const QTensor& Q, double sp) {
  Mat3 B = Q;
  B[0][0] += sp / 3.0;
  B[1][1] += sp / 3.0;
  B[2][2] += sp / 3.0;
  return B;
}

Mat3 sym_part(const Mat3& x) { return 0.5 * (x + transpose(x)); }

}  // namespace

ProjectionResult project_pi(const QTensor& Q, const BulkConstants& bc) {
  EigenSystem e = eigen_decompose(Q);
  Vec3 u = sign_normalized(Vec3{{e.rotation[0][2], e.rotation[1][2], e.rotation[2][2]}});
  ProjectionResult r;
  r.director = u;
  r.pi_Q = uniaxial_from_director(u, bc.s_plus);
  r.distance = frob_norm(Q - r.pi_Q);
  r.rotation = gauge_rotation(u);
  double gap = e.eigenvalues[2] - e.eigenvalues[1];
  r.in_S_delta = (r.distance <= s_delta_radius(bc) * (1.0 + 1e-12)) && (gap >= 0.5 * bc.s_plus);
  return r;
}

Mat3 rotation_RQ(const QTensor& Q, const BulkConstants& bc) {
  ProjectionResult r = project_pi(Q, bc);
  if (!r.in_S_delta) throw std::domain_error("rotation_RQ: tensor outside S_delta, rotation ill-conditioned");
  return r.rotation;
}

double dist_to_uniaxial(const QTensor& Q, const BulkConstants& bc) { return project_pi(Q, bc).distance; }

double gB_block_identity_check(const QTensor& Q, const BulkConstants& bc) {
  Mat3 r = project_pi(Q, bc).rotation;
  Mat3 qt = mul(transpose(r), mul(Q, r));
  Mat3 g = g_B(bc, qt);
  return std::max(std::fabs(g[0][2]), std::fabs(g[1][2]));
}

double third_identity_residual_point(const QTensor& Q, const GradQ& G, double s_plus) {
  Mat3 a;
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) a[l][k] = frobenius(G.g[l], G.g[k]);
  double lhs = frobenius(Q, a);
  double rhs = 3.0 / s_plus * frobenius(mul(Q, Q), a) - 2.0 * s_plus / 3.0 * grad_sq(G);
  return std::fabs(lhs - rhs);
}

Mat3 dpi_fd(const QTensor& Q, const Mat3& xi, const BulkConstants& bc) {
  double h = 1e-5 * bc.s_plus;
  Mat3 plus = project_pi(Q + h * xi, bc).pi_Q;
  Mat3 minus = project_pi(Q - h * xi, bc).pi_Q;
  return (1.0 / (2.0 * h)) * (plus - minus);
}

Mat3 uniaxial_flux_m1(const MaterialConstants& mc, const QTensor& Q, const GradQ& G, int k) {
  double sp = mc.bulk.s_plus;
  GradQ P = elastic_dp(mc, Q, G);
  Mat3 p = sym_part(P.g[k]);
  Mat3 B = b_tensor(Q, sp);
  Mat3 m = mul(p, B) + mul(B, p);
  m -= (2.0 / sp * frobenius(B, p)) * B;
  return (1.0 / sp) * m;
}

Mat3 uniaxial_H_local(const MaterialConstants& mc, const QTensor& Q, const GradQ& G, const Mat3& div_m1) {
  double sp = mc.bulk.s_plus;
  GradQ P = elastic_dp(mc, Q, G);
  Mat3 dq = elastic_dQ(mc, Q, G);
  Mat3 B = b_tensor(Q, sp);

  // chain-rule remainders of d_k applied to the B-dependent factors of M1[k],
  // then the projected bulk-slot group; everything shares the 1/s+ normalization
  Mat3 h = sp * div_m1;
  for (int k = 0; k < 3; ++k) {
    Mat3 p = sym_part(P.g[k]);
    h -= mul(p, G.g[k]) + mul(G.g[k], p);
    h += (2.0 / sp) * (frobenius(p, G.g[k]) * B + frobenius(p, B) * G.g[k]);
  }
  h -= mul(dq, B) + mul(B, dq);
  h += (2.0 / sp * frobenius(dq, B)) * B;
  return (1.0 / sp) * symmetrize_traceless(h);
}

}  // namespace qlc
