#include "qlc/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qlc {
namespace {

Mat3 random_matrix(Rng& rng) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = rng.normal();
  return m;
}

Mat3 random_symmetric(Rng& rng) {
  Mat3 m = random_matrix(rng);
  return 0.5 * (m + transpose(m));
}

// Independent bilinear form of the bulk Hessian, raw entry convention:
//   D2[X,Y] = -a tr(X^T Y) - b tr((YQ + QY) X) + c (|Q|^2 tr(X^T Y) + 2 <Q,X><Q,Y>)
double bulk_hessian_bilinear(const BulkConstants& bc, const Mat3& Q, const Mat3& X,
                             const Mat3& Y) {
  const double xy = frobenius(X, Y);
  const double q2 = frobenius(Q, Q);
  Mat3 anti = mul(Y, Q) + mul(Q, Y);
  return -bc.a * xy - bc.b * trace(mul(anti, X)) +
         bc.c * (q2 * xy + 2.0 * frobenius(Q, X) * frobenius(Q, Y));
}

Mat3 unit_entry(int i, int j) {
  Mat3 m{};
  m[i][j] = 1.0;
  return m;
}

double res_lie_identity(const MaterialConstants&, Rng& rng, int& samples) {
  samples = 1000;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Mat3 A = random_symmetric(rng);
    Mat3 B = random_symmetric(rng);
    Mat3 F = random_matrix(rng);
    double lhs = frobenius(lie_bracket(A, F), B);
    double mid = frobenius(F, lie_bracket(A, B));
    double rhs = -frobenius(transpose(F), lie_bracket(A, B));
    worst = std::max({worst, std::abs(lhs - mid), std::abs(mid - rhs)});
  }
  return worst;
}

double res_abc_relation(const MaterialConstants& mc, Rng& rng, int& samples) {
  samples = 101;
  auto rel = [](const BulkConstants& bc) {
    double lhs = 3.0 * bc.a + bc.b * bc.s_plus;
    double rhs = 2.0 * bc.c * bc.s_plus * bc.s_plus;
    return std::abs(lhs - rhs) / lhs;
  };
  double worst = rel(mc.bulk);
  for (int s = 0; s < 100; ++s)
    worst = std::max(worst, rel(make_bulk(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0),
                                          rng.uniform(0.1, 2.0))));
  return worst;
}

double res_hessian_entries(const MaterialConstants& mc, Rng&, int& samples) {
  const BulkConstants& bc = mc.bulk;
  const QTensor qp = uniaxial_from_director(Vec3{{0.0, 0.0, 1.0}}, bc.s_plus);
  HessianFB h = hessian_fB(bc, qp);
  double worst = 0.0;
  samples = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double indep = bulk_hessian_bilinear(bc, qp, unit_entry(i, j), unit_entry(k, l));
          worst = std::max(worst, std::abs(h.entry(i, j, k, l) - indep));
          ++samples;
        }
  if (bc.a == 1.0 && bc.b == 1.0 && bc.c == 1.0) {
    worst = std::max(worst, std::abs(h.entry(0, 0, 0, 0) - 2.0));
    worst = std::max(worst, std::abs(h.entry(2, 2, 2, 2) - 0.5));
    worst = std::max(worst, std::abs(h.entry(0, 0, 1, 1) - 0.5));
    worst = std::max(worst, std::abs(h.entry(0, 0, 2, 2) - (-1.0)));
    samples += 4;
  }
  return worst;
}

double res_hessian_quadratic_form(const MaterialConstants& mc, Rng& rng, int& samples) {
  const BulkConstants& bc = mc.bulk;
  const QTensor qp = uniaxial_from_director(Vec3{{0.0, 0.0, 1.0}}, bc.s_plus);
  HessianFB h = hessian_fB(bc, qp);
  samples = 1000;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    // block form in the frame of the preferred state: zero (1,3)/(2,3) entries
    double x11 = rng.normal(), x12 = rng.normal(), x22 = rng.normal();
    Mat3 xi{};
    xi[0][0] = x11;
    xi[1][1] = x22;
    xi[2][2] = -x11 - x22;
    xi[0][1] = xi[1][0] = x12;
    double form = h.quadratic_form(xi);
    double indep = bulk_hessian_bilinear(bc, qp, xi, xi);
    double n2 = frobenius(xi, xi);
    worst = std::max(worst, std::abs(form - indep) / std::max(1.0, std::abs(form)));
    worst = std::max(worst, std::max(0.0, bc.lambda * n2 - form) / std::max(1.0, n2));
  }
  if (bc.a == 1.0 && bc.b == 1.0 && bc.c == 1.0) {
    Mat3 xi = Mat3::diag(1.0, 1.0, -2.0);
    worst = std::max(worst, std::abs(h.quadratic_form(xi) - 15.0));
    worst = std::max(worst, std::abs(bc.lambda * frobenius(xi, xi) - 9.0));
    samples += 2;
  }
  return worst;
}

double res_gB_is_gradient(const MaterialConstants& mc, Rng& rng, int& samples) {
  const BulkConstants& bc = mc.bulk;
  samples = 300;
  const double h = 1e-5;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Mat3 Q = rng.s0_tensor();
    Mat3 X = random_symmetric(rng);  // carries a trace part to exercise the correction term
    double fd = (f_B_tilde_density(bc, Q + h * X) - f_B_tilde_density(bc, Q + (-h) * X)) /
                (2.0 * h);
    double q2 = frobenius(Q, Q);
    double pred = -frobenius(g_B(bc, Q), X) - (bc.b / 3.0) * q2 * trace(X);
    worst = std::max(worst, std::abs(fd - pred) / std::max(1.0, std::abs(pred)));
  }
  return worst;
}

double res_third_identity(const MaterialConstants& mc, Rng&, int& samples) {
  const BulkConstants& bc = mc.bulk;
  Grid g = make_grid(2, 64, Scheme::spectral);
  TensorField qf(g);
  for (int idx = 0; idx < g.npts(); ++idx) {
    auto x = g.point(idx);
    Vec3 u = normalized(Vec3{{std::cos(x[0]), std::sin(x[0]), 0.2 * std::sin(x[1])}});
    qf.set(idx, uniaxial_from_director(u, bc.s_plus));
  }
  std::vector<double> res = third_identity_residual(qf, bc);
  TensorGrad G = gradient(qf);
  samples = g.npts();
  double worst = 0.0;
  for (int idx = 0; idx < g.npts(); ++idx)
    worst = std::max(worst, res[idx] / std::max(1.0, grad_sq(G.at(idx)) * bc.s_plus));
  return worst;
}

double res_gB_block(const MaterialConstants& mc, Rng& rng, int& samples) {
  const BulkConstants& bc = mc.bulk;
  samples = 500;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    QTensor Q = sample_s_delta(bc, rng);
    Mat3 R = rotation_RQ(Q, bc);
    Mat3 qt = mul(transpose(R), mul(Q, R));
    // the rotated state decouples its third axis, and the bulk force inherits that
    worst = std::max({worst, std::abs(qt[0][2]), std::abs(qt[1][2]),
                      gB_block_identity_check(Q, bc)});
  }
  return worst;
}

double res_pi_commutes(const MaterialConstants& mc, Rng& rng, int& samples) {
  const BulkConstants& bc = mc.bulk;
  samples = 1000;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    QTensor Q = sample_s_delta(bc, rng);
    Mat3 pi = project_pi(Q, bc).pi_Q;
    worst = std::max(worst, frob_norm(lie_bracket(pi, Q)));
  }
  return worst;
}

double res_fB_dist_lower(const MaterialConstants& mc, Rng& rng, int& samples) {
  const BulkConstants& bc = mc.bulk;
  samples = 2000;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    QTensor Q = sample_s_delta(bc, rng);
    double d = project_pi(Q, bc).distance;
    worst = std::max(worst, 0.5 * bc.lambda * d * d - f_B_density(bc, Q));
  }
  return worst;
}

double res_uniaxial_H_tangency(const MaterialConstants& mc, Rng&, int& samples) {
  const BulkConstants& bc = mc.bulk;
  Grid g = make_grid(2, 32, Scheme::spectral);
  TensorField qf(g);
  for (int idx = 0; idx < g.npts(); ++idx) {
    auto x = g.point(idx);
    double phi = x[0] + 0.3 * std::sin(x[0] + x[1]);
    Vec3 u{{std::cos(phi), std::sin(phi), 0.0}};
    qf.set(idx, uniaxial_from_director(u, bc.s_plus));
  }
  TensorField H = molecular_field_uniaxial(qf, mc);
  samples = 0;
  double worst = 0.0;
  for (int idx = 0; idx < g.npts(); idx += 37) {
    Mat3 xi = H.get(idx);
    Mat3 pxi = dpi_fd(qf.get(idx), xi, bc);
    worst = std::max(worst, frob_norm(xi - pxi) / (1.0 + frob_norm(xi)));
    ++samples;
  }
  return worst;
}

double res_biaxial_H_gradient(const MaterialConstants& mc, Rng& rng, int& samples) {
  Grid g = make_grid(2, 32, Scheme::spectral);
  const QTensor qe = uniaxial_from_director(Vec3{{0.0, 0.0, 1.0}}, mc.bulk.s_plus);
  TensorField qf = random_smooth_tensor_field(g, rng, 2, 0.4);
  for (int idx = 0; idx < g.npts(); ++idx) qf.set(idx, qe + qf.get(idx));
  TensorField xi = random_smooth_tensor_field(g, rng, 2, 0.5);
  TensorField H = full_molecular_field(qf, mc);
  std::vector<double> dens(g.npts());
  for (int idx = 0; idx < g.npts(); ++idx) dens[idx] = frobenius(H.get(idx), xi.get(idx));
  double pair = integrate(g, dens);
  auto energy = [&](const TensorField& q) {
    return total_elastic_energy(q, mc) + total_bulk_energy(q, mc.bulk) / mc.el.L;
  };
  const double h = 1e-5;
  TensorField qp = qf, qm = qf;
  add_scaled(qp, h, xi);
  add_scaled(qm, -h, xi);
  double fd = (energy(qp) - energy(qm)) / (2.0 * h);
  samples = 1;
  return std::abs(pair + fd) / std::max(1.0, std::abs(pair));
}

double res_energy_identity(const MaterialConstants& mc, Rng& rng, int& samples) {
  Grid g = make_grid(2, 24, Scheme::spectral);
  const std::uint64_t init_seed = rng.raw();
  auto final_residual = [&](double dt, int nsteps) {
    SimState s = init_perturbed(g, mc, SystemKind::biaxial, 0.15, init_seed);
    SchemeConfig cfg;
    cfg.dt = dt;
    EnergyLedger ledger;
    ledger_append(ledger, s, 0.0);
    for (int i = 0; i < nsteps; ++i) {
      step(s, cfg);
      ledger_append(ledger, s, dt);
    }
    return ledger.rows.back().identity_residual;
  };
  double coarse = final_residual(8e-4, 10);
  double fine = final_residual(4e-4, 20);
  samples = 30;
  return std::abs(coarse / fine - 2.0);
}

double res_coercivity(const MaterialConstants& mc, Rng&, int& samples) {
  const ElasticConstants& el = mc.el;
  CoercivityResult r = check_coercivity(el.L1, el.L2, el.L3, el.L4, mc.bulk);
  samples = r.samples;
  return r.ok ? 0.0 : std::max(1.0, std::abs(r.alpha));
}

struct CheckDef {
  const char* name;
  double tolerance;
  const char* provenance;
  double (*residual)(const MaterialConstants&, Rng&, int&);
};

const CheckDef kRegistry[] = {
    {"lie_identity", 1e-12, "commutator pairing identity for symmetric pairs", res_lie_identity},
    {"abc_relation", 1e-12, "critical-amplitude relation among bulk coefficients",
     res_abc_relation},
    {"hessian_entries", 1e-10, "bulk hessian entries at the preferred state",
     res_hessian_entries},
    {"hessian_quadratic_form", 1e-10, "bulk hessian block form and its spectral lower bound",
     res_hessian_quadratic_form},
    {"gB_is_gradient", 1e-6, "bulk force equals the shifted-potential gradient",
     res_gB_is_gradient},
    {"third_identity", 1e-8, "cubic gradient decomposition on the uniaxial manifold",
     res_third_identity},
    {"gB_block", 1e-10, "rotated bulk force keeps the decoupled block structure",
     res_gB_block},
    {"pi_commutes", 1e-10, "nearest-point projection commutes with its argument",
     res_pi_commutes},
    {"fB_dist_lower", 1e-12, "quadratic distance lower bound for the bulk density",
     res_fB_dist_lower},
    {"uniaxial_H_tangency", 1e-6, "constrained molecular field lies in the tangent space",
     res_uniaxial_H_tangency},
    {"biaxial_H_gradient", 1e-6, "molecular field matches the negative energy gradient",
     res_biaxial_H_gradient},
    {"energy_identity", 0.4, "discrete energy balance residual is first order in dt",
     res_energy_identity},
    {"coercivity", 0.0, "distortion energy coercivity constant is positive", res_coercivity},
};

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const CheckDef& d : kRegistry) v.emplace_back(d.name);
    return v;
  }();
  return names;
}

CheckReport run_check(const std::string& name, const MaterialConstants& mc, std::uint64_t seed) {
  for (const CheckDef& d : kRegistry) {
    if (name == d.name) {
      Rng rng(seed);
      CheckReport r;
      r.name = d.name;
      r.tolerance = d.tolerance;
      r.provenance = d.provenance;
      r.seed = seed;
      r.max_residual = d.residual(mc, rng, r.samples);
      r.passed = r.max_residual <= r.tolerance;
      return r;
    }
  }
  throw std::invalid_argument("unknown check: " + name);
}

std::vector<CheckReport> run_all_checks(const MaterialConstants& mc, std::uint64_t seed) {
  std::vector<CheckReport> out;
  std::uint64_t k = 0;
  for (const CheckDef& d : kRegistry) out.push_back(run_check(d.name, mc, seed + k++));
  return out;
}

std::string check_report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["seed"] = r.seed;
  return j.dump();
}

}  // namespace qlc
