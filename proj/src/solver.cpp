#include "qlc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qlc {
namespace {

TensorField project_field(const TensorField& f, const BulkConstants& bc) {
  TensorField out(f.grid);
  const int npts = f.grid.npts();
  for (int idx = 0; idx < npts; ++idx) out.set(idx, project_pi(f.get(idx), bc).pi_Q);
  return out;
}

double max_speed(const VectorField& v) {
  double m = 0.0;
  const int npts = v.grid.npts();
  for (int idx = 0; idx < npts; ++idx) m = std::max(m, norm(v.get(idx)));
  return m;
}

void check_finite(const SimState& s, const char* where) {
  auto bad = [](const std::vector<double>& a) {
    return std::any_of(a.begin(), a.end(), [](double x) { return !std::isfinite(x); });
  };
  bool broken = false;
  for (const auto& comp : s.Q.c) broken = broken || bad(comp);
  for (const auto& comp : s.v.c) broken = broken || bad(comp);
  if (!broken) return;
  std::ostringstream msg;
  msg << "non-finite state (" << where << ") at t=" << s.t << ", step " << s.step_count;
  throw std::runtime_error(msg.str());
}

// (div X)_i = d_j X_ij
VectorField div_matrix(const MatrixField& X) {
  const Grid& g = X.grid;
  const int npts = g.npts();
  VectorField out(g);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> acc(npts, 0.0);
    for (int j = 0; j < g.dim; ++j) {
      std::vector<double> d = derivative(g, X.c[3 * i + j], j);
      for (int idx = 0; idx < npts; ++idx) acc[idx] += d[idx];
    }
    out.c[i] = std::move(acc);
  }
  return out;
}

// Full right-hand side of both systems. With implicit_split the stiff leading terms
// (L1-tilde laplacian of Q, viscous laplacian of v) are omitted for an implicit solve.
// renormalize_eval lets internal stepping evaluate the constrained field on a copy
// projected back onto S_*; the public rhs entry points keep the strict gate instead.
Rhs build_rates(const SimState& s, SystemKind kind, bool implicit_split, bool renormalize_eval) {
  const Grid& g = s.Q.grid;
  const MaterialConstants& mc = s.material;
  const double lt1 = mc.el.L1_tilde;
  const bool uni = (kind == SystemKind::uniaxial);

  TensorField qproj;
  if (uni && renormalize_eval) qproj = project_field(s.Q, mc.bulk);
  const TensorField& Q = (uni && renormalize_eval) ? qproj : s.Q;

  TensorField H = uni ? molecular_field_uniaxial(Q, mc) : molecular_field_biaxial(Q, mc);
  TensorGrad GQ = gradient(Q);
  MatrixField gv = gradient(s.v);
  TensorField lapQ;
  VectorField lapv;
  if (implicit_split)
    lapQ = laplacian(Q);
  else
    lapv = laplacian(s.v);

  const int npts = g.npts();
  MatrixField X(g);
  for (int idx = 0; idx < npts; ++idx) {
    Mat3 q = Q.get(idx);
    X.set(idx, lie_bracket(q, H.get(idx)) + distortion_stress(mc, q, GQ.at(idx)));
  }
  VectorField divX = div_matrix(X);

  Rhs r{TensorField(g), VectorField(g)};
  const double invL = 1.0 / mc.el.L;
  for (int idx = 0; idx < npts; ++idx) {
    Mat3 q = Q.get(idx);
    GradQ gg = GQ.at(idx);
    Vec3 vv = s.v.get(idx);
    Mat3 gvm = gv.get(idx);
    Mat3 om = 0.5 * (gvm - transpose(gvm));
    Mat3 adv = vv[0] * gg.g[0] + vv[1] * gg.g[1] + vv[2] * gg.g[2];
    Mat3 ht = H.get(idx);
    if (!uni) ht += invL * g_B(mc.bulk, q);
    if (implicit_split) ht -= lt1 * lapQ.get(idx);
    r.dQ.set(idx, -1.0 * adv - lie_bracket(q, om) + ht);

    Vec3 dX = divX.get(idx);
    Vec3 lv = implicit_split ? Vec3{{0.0, 0.0, 0.0}} : lapv.get(idx);
    Vec3 rate;
    for (int i = 0; i < 3; ++i)
      rate[i] = dX[i] + lv[i] - (gvm[i][0] * vv[0] + gvm[i][1] * vv[1] + gvm[i][2] * vv[2]);
    r.dv.set(idx, rate);
  }
  dealias(r.dQ);
  dealias(r.dv);
  return r;
}

void imex_step(SimState& s, double dt) {
  const Grid& g = s.Q.grid;
  const double lt1 = s.material.el.L1_tilde;
  Rhs e = build_rates(s, s.system, true, true);
  add_scaled(s.Q, dt, e.dQ);
  for (auto& comp : s.Q.c) helmholtz_invert(g, comp, dt * lt1);
  add_scaled(s.v, dt, e.dv);
  for (auto& comp : s.v.c) helmholtz_invert(g, comp, dt);
  s.v = leray_project(s.v);
}

void rk2_step(SimState& s, double dt) {
  Rhs k1 = build_rates(s, s.system, false, true);
  SimState mid = s;
  add_scaled(mid.Q, dt, k1.dQ);
  add_scaled(mid.v, dt, k1.dv);
  mid.v = leray_project(mid.v);
  Rhs k2 = build_rates(mid, s.system, false, true);
  add_scaled(s.Q, 0.5 * dt, k1.dQ);
  add_scaled(s.Q, 0.5 * dt, k2.dQ);
  add_scaled(s.v, 0.5 * dt, k1.dv);
  add_scaled(s.v, 0.5 * dt, k2.dv);
  s.v = leray_project(s.v);
}

struct PicardResult {
  bool converged = false;
  int iters = 0;
  std::vector<double> diffs;
  TensorField Q;
  VectorField v;
};

// One backward-Euler solve by Gauss-Seidel sweeps: momentum first with lagged
// coefficients, then the order parameter with the fresh vorticity. The L1-tilde
// laplacian is implicit; the remaining elastic terms are lagged, so the fixed point
// is the backward-Euler update of the full system.
PicardResult picard_attempt(const SimState& s, const SchemeConfig& cfg, double dt) {
  const Grid& g = s.Q.grid;
  const MaterialConstants& mc = s.material;
  const double lt1 = mc.el.L1_tilde;
  const double invL = 1.0 / mc.el.L;
  const bool uni = (s.system == SystemKind::uniaxial);
  const int npts = g.npts();

  PicardResult res;
  TensorField Qm = uni ? project_field(s.Q, mc.bulk) : s.Q;
  VectorField vm = s.v;
  double prev = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int m = 0; m < cfg.picard_max_iters; ++m) {
    TensorField H = uni ? molecular_field_uniaxial(Qm, mc) : molecular_field_biaxial(Qm, mc);
    TensorGrad GQ = gradient(Qm);
    MatrixField gv = gradient(vm);
    MatrixField X(g);
    for (int idx = 0; idx < npts; ++idx) {
      Mat3 q = Qm.get(idx);
      X.set(idx, lie_bracket(q, H.get(idx)) + distortion_stress(mc, q, GQ.at(idx)));
    }
    VectorField divX = div_matrix(X);

    VectorField ev(g);
    for (int idx = 0; idx < npts; ++idx) {
      Vec3 vv = vm.get(idx);
      Mat3 gvm = gv.get(idx);
      Vec3 dX = divX.get(idx);
      Vec3 rate;
      for (int i = 0; i < 3; ++i)
        rate[i] = dX[i] - (gvm[i][0] * vv[0] + gvm[i][1] * vv[1] + gvm[i][2] * vv[2]);
      ev.set(idx, rate);
    }
    dealias(ev);
    VectorField vnext = s.v;
    add_scaled(vnext, dt, ev);
    for (auto& comp : vnext.c) helmholtz_invert(g, comp, dt);
    vnext = leray_project(vnext);

    MatrixField gvn = gradient(vnext);
    TensorField lapQm = laplacian(Qm);
    TensorField eq(g);
    for (int idx = 0; idx < npts; ++idx) {
      Mat3 q = Qm.get(idx);
      GradQ gg = GQ.at(idx);
      Vec3 vv = vnext.get(idx);
      Mat3 gvm = gvn.get(idx);
      Mat3 om = 0.5 * (gvm - transpose(gvm));
      Mat3 adv = vv[0] * gg.g[0] + vv[1] * gg.g[1] + vv[2] * gg.g[2];
      Mat3 ht = H.get(idx) - lt1 * lapQm.get(idx);
      if (!uni) ht += invL * g_B(mc.bulk, q);
      eq.set(idx, -1.0 * adv - lie_bracket(q, om) + ht);
    }
    dealias(eq);
    TensorField Qnext = s.Q;
    add_scaled(Qnext, dt, eq);
    for (auto& comp : Qnext.c) helmholtz_invert(g, comp, dt * lt1);
    if (uni) Qnext = project_field(Qnext, mc.bulk);

    TensorField dQd = Qnext;
    add_scaled(dQd, -1.0, Qm);
    VectorField dvd = vnext;
    add_scaled(dvd, -1.0, vm);
    double diff = norm_H1(dQd) + norm_L2(dvd);
    res.diffs.push_back(diff);
    res.iters = m + 1;
    Qm = std::move(Qnext);
    vm = std::move(vnext);
    if (diff <= cfg.picard_tol) {
      res.converged = true;
      break;
    }
    rising = (diff >= prev) ? rising + 1 : 0;
    if (rising >= 3) break;
    prev = diff;
  }
  res.Q = std::move(Qm);
  res.v = std::move(vm);
  return res;
}

double worst_mode_sq(const Grid& g) {
  const double h = g.h();
  const double per_axis = (g.scheme == Scheme::spectral) ? (M_PI / h) * (M_PI / h) : 4.0 / (h * h);
  return g.dim * per_axis;
}

}  // namespace

double auto_dt(const SimState& s, TimeScheme scheme) {
  const MaterialConstants& mc = s.material;
  const ElasticConstants& el = mc.el;
  double dt = std::numeric_limits<double>::infinity();
  const double vmax = max_speed(s.v);
  const double h = s.Q.grid.h();
  if (vmax > 1e-12) dt = std::min(dt, 0.25 * h / vmax);
  const double cross = std::abs(el.L2) + std::abs(el.L3) + 3.0 * std::abs(el.L4);
  double nu;
  if (s.system == SystemKind::biaxial) {
    nu = cross;
    if (scheme == TimeScheme::explicit_rk2) nu += el.L1_tilde + 1.0;
  } else {
    nu = 4.0 * mc.bulk.s_plus * (el.L1_tilde + cross);
    if (scheme == TimeScheme::explicit_rk2) nu += 1.0;
  }
  if (nu > 0.0) dt = std::min(dt, 1.6 / (nu * worst_mode_sq(s.Q.grid)));
  if (s.system == SystemKind::biaxial) dt = std::min(dt, 0.5 * el.L / mc.bulk.a);
  if (!std::isfinite(dt))
    throw std::invalid_argument("auto_dt: no finite step bound for this state");
  return dt;
}

Rhs rhs_biaxial(const SimState& s) { return build_rates(s, SystemKind::biaxial, false, false); }

Rhs rhs_uniaxial(const SimState& s) { return build_rates(s, SystemKind::uniaxial, false, false); }

StepStats step(SimState& s, const SchemeConfig& cfg) {
  StepStats st;
  double dt = (cfg.dt > 0.0) ? cfg.dt : auto_dt(s, cfg.scheme);
  switch (cfg.scheme) {
    case TimeScheme::imex:
      imex_step(s, dt);
      st.dt_used = dt;
      break;
    case TimeScheme::explicit_rk2:
      rk2_step(s, dt);
      st.dt_used = dt;
      break;
    case TimeScheme::picard: {
      bool done = false;
      for (int k = 0; k <= 5 && !done; ++k) {
        PicardResult r = picard_attempt(s, cfg, dt);
        if (r.converged) {
          s.Q = std::move(r.Q);
          s.v = std::move(r.v);
          st.dt_used = dt;
          st.picard_iters = r.iters;
          st.halvings = k;
          st.picard_diffs = std::move(r.diffs);
          done = true;
        } else if (k < 5) {
          dt *= 0.5;
        }
      }
      if (!done) {
        std::ostringstream msg;
        msg << "picard iteration failed to contract after 5 step halvings at t=" << s.t
            << ", step " << s.step_count;
        throw std::runtime_error(msg.str());
      }
      break;
    }
  }
  s.t += st.dt_used;
  ++s.step_count;
  if (s.system == SystemKind::uniaxial && cfg.renormalize_every > 0 &&
      s.step_count % cfg.renormalize_every == 0)
    s.Q = project_field(s.Q, s.material.bulk);
  check_finite(s, "after step");
  return st;
}

LedgerRow energy_report(const SimState& s) {
  LedgerRow row;
  row.t = s.t;
  EnergyBreakdown e = total_energy(s.Q, s.v, s.material);
  row.e_elastic = e.elastic;
  row.e_bulk_over_L = e.bulk_over_L;
  row.e_kinetic = e.kinetic;
  row.e_total = e.total;
  TensorField Hd = (s.system == SystemKind::biaxial)
                       ? full_molecular_field(s.Q, s.material)
                       : molecular_field_uniaxial(project_field(s.Q, s.material.bulk), s.material);
  const double hn = norm_L2(Hd);
  row.dissipation_H = hn * hn;
  MatrixField gv = gradient(s.v);
  double acc = 0.0;
  for (const auto& comp : gv.c) {
    std::vector<double> sq(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) sq[i] = comp[i] * comp[i];
    acc += integrate(s.v.grid, sq);
  }
  row.dissipation_gradv = acc;
  return row;
}

void ledger_append(EnergyLedger& ledger, const SimState& s, double dt) {
  LedgerRow row = energy_report(s);
  if (!ledger.rows.empty() && dt > 0.0) {
    const LedgerRow& prev = ledger.rows.back();
    row.identity_residual = std::abs((row.e_total - prev.e_total) / dt + prev.dissipation_H +
                                     prev.dissipation_gradv);
  }
  ledger.rows.push_back(row);
}

std::vector<double> recover_pressure(const SimState& s) {
  Rhs r = (s.system == SystemKind::biaxial) ? rhs_biaxial(s) : rhs_uniaxial(s);
  std::vector<double> p = divergence(r.dv);
  poisson_solve(s.v.grid, p);
  return p;
}

double concentration_L3(const SimState& s) {
  const Grid& g = s.Q.grid;
  TensorGrad GQ = gradient(s.Q);
  const int npts = g.npts();
  std::vector<double> dens(npts);
  for (int idx = 0; idx < npts; ++idx) {
    const double gq = grad_sq(GQ.at(idx));
    const double vv = norm(s.v.get(idx));
    dens[idx] = std::pow(gq, 1.5) + vv * vv * vv;
  }
  return integrate(g, dens);
}

namespace {
SimState make_state(const Grid& g, const MaterialConstants& mc, SystemKind system) {
  SimState s;
  s.Q = TensorField(g);
  s.v = VectorField(g);
  s.system = system;
  s.material = mc;
  return s;
}
}  // namespace

SimState init_constant_taylor_green(const Grid& g, const MaterialConstants& mc,
                                    SystemKind system, double v_amp) {
  SimState s = make_state(g, mc, system);
  const QTensor qe = uniaxial_from_director(Vec3{{0.0, 0.0, 1.0}}, mc.bulk.s_plus);
  const double k0 = 2.0 * M_PI / g.length;
  const int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto x = g.point(idx);
    s.Q.set(idx, qe);
    const double mod3 = (g.dim == 3) ? std::cos(k0 * x[2]) : 1.0;
    s.v.set(idx, Vec3{{v_amp * std::sin(k0 * x[0]) * std::cos(k0 * x[1]) * mod3,
                       -v_amp * std::cos(k0 * x[0]) * std::sin(k0 * x[1]) * mod3, 0.0}});
  }
  s.v = leray_project(s.v);
  return s;
}

SimState init_winding(const Grid& g, const MaterialConstants& mc, SystemKind system, int k_wind) {
  SimState s = make_state(g, mc, system);
  const double kk = 2.0 * M_PI / g.length * k_wind;
  const int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto x = g.point(idx);
    Vec3 u{{std::cos(kk * x[0]), std::sin(kk * x[0]), 0.0}};
    s.Q.set(idx, uniaxial_from_director(u, mc.bulk.s_plus));
  }
  return s;
}

SimState init_perturbed(const Grid& g, const MaterialConstants& mc, SystemKind system, double eps,
                        std::uint64_t seed) {
  SimState s = make_state(g, mc, system);
  Rng rng(seed);
  TensorField pert = random_smooth_tensor_field(g, rng, 2, eps);
  const QTensor qe = uniaxial_from_director(Vec3{{0.0, 0.0, 1.0}}, mc.bulk.s_plus);
  // dist(qe + p, S_*) <= |p|, so capping the pointwise norm keeps the state in S_delta
  const double cap = 0.95 * s_delta_radius(mc.bulk);
  double maxn = 0.0;
  const int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) maxn = std::max(maxn, frob_norm(pert.get(idx)));
  const double fac = (maxn > cap) ? cap / maxn : 1.0;
  for (int idx = 0; idx < npts; ++idx) s.Q.set(idx, qe + fac * pert.get(idx));
  s.v = random_smooth_vector_field(g, rng, 2, eps, true);
  dealias(s.Q);
  dealias(s.v);
  if (system == SystemKind::uniaxial) s.Q = project_field(s.Q, mc.bulk);
  s.v = leray_project(s.v);
  return s;
}

}  // namespace qlc
