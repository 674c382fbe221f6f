#include "qlc/molecular.hpp"

#include <stdexcept>

namespace qlc {

namespace {

// sum_k d_k M[k] for per-axis matrix fields, restricted to present axes
MatrixField flux_divergence(const Grid& g, const std::array<MatrixField, 3>& m) {
  MatrixField out(g);
  for (int k = 0; k < g.dim; ++k)
    for (int comp = 0; comp < 9; ++comp) {
      auto d = derivative(g, m[k].c[comp], k);
      for (size_t idx = 0; idx < d.size(); ++idx) out.c[comp][idx] += d[idx];
    }
  return out;
}

}  // namespace

TensorField molecular_field_biaxial(const TensorField& qf, const MaterialConstants& mc) {
  const Grid& g = qf.grid;
  int npts = g.npts();
  TensorGrad G = gradient(qf);
  std::array<MatrixField, 3> pk{MatrixField(g), MatrixField(g), MatrixField(g)};
  std::vector<Mat3> dq(npts);
  for (int idx = 0; idx < npts; ++idx) {
    Mat3 q = qf.get(idx);
    GradQ gg = G.at(idx);
    GradQ p = elastic_dp(mc, q, gg);
    for (int k = 0; k < 3; ++k) pk[k].set(idx, p.g[k]);
    dq[idx] = elastic_dQ(mc, q, gg);
  }
  MatrixField divp = flux_divergence(g, pk);
  TensorField out(g);
  for (int idx = 0; idx < npts; ++idx) out.set(idx, symmetrize_traceless(divp.get(idx) - dq[idx]));
  return out;
}

TensorField full_molecular_field(const TensorField& qf, const MaterialConstants& mc) {
  TensorField out = molecular_field_biaxial(qf, mc);
  double inv_L = 1.0 / mc.el.L;
  int npts = qf.grid.npts();
  for (int idx = 0; idx < npts; ++idx)
    out.set(idx, out.get(idx) + inv_L * g_B(mc.bulk, qf.get(idx)));
  return out;
}

MatrixField distortion_stress_field(const TensorField& qf, const MaterialConstants& mc) {
  const Grid& g = qf.grid;
  TensorGrad G = gradient(qf);
  MatrixField out(g);
  int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx)
    out.set(idx, distortion_stress(mc, qf.get(idx), G.at(idx)));
  return out;
}

TensorField molecular_field_uniaxial(const TensorField& qf, const MaterialConstants& mc) {
  const Grid& g = qf.grid;
  int npts = g.npts();
  TensorField qs(g);
  for (int idx = 0; idx < npts; ++idx) {
    ProjectionResult pr = project_pi(qf.get(idx), mc.bulk);
    if (pr.distance > 1e-8)
      throw std::domain_error("molecular_field_uniaxial: value farther than 1e-8 from S_*");
    qs.set(idx, pr.pi_Q);
  }
  TensorGrad G = gradient(qs);
  std::array<MatrixField, 3> m1{MatrixField(g), MatrixField(g), MatrixField(g)};
  for (int idx = 0; idx < npts; ++idx) {
    Mat3 q = qs.get(idx);
    GradQ gg = G.at(idx);
    for (int k = 0; k < 3; ++k) m1[k].set(idx, uniaxial_flux_m1(mc, q, gg, k));
  }
  MatrixField divm = flux_divergence(g, m1);
  TensorField out(g);
  for (int idx = 0; idx < npts; ++idx)
    out.set(idx, uniaxial_H_local(mc, qs.get(idx), G.at(idx), divm.get(idx)));
  return out;
}

std::vector<double> third_identity_residual(const TensorField& qf, const BulkConstants& bc) {
  TensorGrad G = gradient(qf);
  int npts = qf.grid.npts();
  std::vector<double> out(npts);
  for (int idx = 0; idx < npts; ++idx)
    out[idx] = third_identity_residual_point(qf.get(idx), G.at(idx), bc.s_plus);
  return out;
}

double total_elastic_energy(const TensorField& qf, const MaterialConstants& mc) {
  TensorGrad G = gradient(qf);
  int npts = qf.grid.npts();
  std::vector<double> dens(npts);
  for (int idx = 0; idx < npts; ++idx) dens[idx] = f_E_density(mc, qf.get(idx), G.at(idx));
  return integrate(qf.grid, dens);
}

double total_bulk_energy(const TensorField& qf, const BulkConstants& bc) {
  int npts = qf.grid.npts();
  std::vector<double> dens(npts);
  for (int idx = 0; idx < npts; ++idx) dens[idx] = f_B_density(bc, qf.get(idx));
  return integrate(qf.grid, dens);
}

double kinetic_energy(const VectorField& vf) {
  double n = norm_L2(vf);
  return 0.5 * n * n;
}

EnergyBreakdown total_energy(const TensorField& qf, const VectorField& vf,
                             const MaterialConstants& mc) {
  EnergyBreakdown e;
  e.elastic = total_elastic_energy(qf, mc);
  e.bulk_over_L = total_bulk_energy(qf, mc.bulk) / mc.el.L;
  e.kinetic = kinetic_energy(vf);
  e.total = e.elastic + e.bulk_over_L + e.kinetic;
  return e;
}

}  // namespace qlc
