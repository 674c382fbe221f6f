#include "qlc/material.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlc/energy.hpp"
#include "qlc/rng.hpp"

namespace qlc {

namespace {

double f_tilde_uniaxial_min_analytic(double a, double b, double c, double s) {
  return -a * s * s / 3.0 - 2.0 * b * s * s * s / 27.0 + c * s * s * s * s / 9.0;
}

// descent cross-check of the analytic bulk minimum (fixed internal seed)
double bulk_min_by_descent(const BulkConstants& bc) {
  Rng rng(0x9e3779b97f4a7c15ull);
  double best = 0.0;
  for (int seed = 0; seed < 8; ++seed) {
    Mat3 q = rng.s0_tensor(1.0);
    double f = f_B_tilde_density(bc, q);
    double eta = 0.1;
    for (int it = 0; it < 4000; ++it) {
      Mat3 step = q + eta * g_B(bc, q);
      double fs = f_B_tilde_density(bc, step);
      if (fs < f) {
        q = step;
        f = fs;
        eta *= 1.1;
      } else {
        eta *= 0.5;
        if (eta < 1e-14) break;
      }
    }
    if (seed == 0 || f < best) best = f;
  }
  return best;
}

// cyclic Jacobi for small dense symmetric matrices; returns (min, max) eigenvalue
void jacobi_extremes(std::vector<double>& h, int n, double& lmin, double& lmax) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += h[p * n + q] * h[p * n + q];
    if (off < 1e-28 * (1.0 + std::fabs(h[0]))) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = h[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = 0.5 * std::atan2(2.0 * apq, h[p * n + p] - h[q * n + q]);
        double cth = std::cos(theta), sth = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          double hkp = h[k * n + p], hkq = h[k * n + q];
          h[k * n + p] = cth * hkp + sth * hkq;
          h[k * n + q] = -sth * hkp + cth * hkq;
        }
        for (int k = 0; k < n; ++k) {
          double hpk = h[p * n + k], hqk = h[q * n + k];
          h[p * n + k] = cth * hpk + sth * hqk;
          h[q * n + k] = -sth * hpk + cth * hqk;
        }
      }
  }
  lmin = h[0];
  lmax = h[0];
  for (int k = 1; k < n; ++k) {
    lmin = std::min(lmin, h[k * n + k]);
    lmax = std::max(lmax, h[k * n + k]);
  }
}

// orthonormal basis of S0 under the Frobenius product
const Mat3* s0_basis() {
  static const Mat3 basis[5] = {
      [] { Mat3 m; m[0][1] = m[1][0] = 1.0 / std::sqrt(2.0); return m; }(),
      [] { Mat3 m; m[0][2] = m[2][0] = 1.0 / std::sqrt(2.0); return m; }(),
      [] { Mat3 m; m[1][2] = m[2][1] = 1.0 / std::sqrt(2.0); return m; }(),
      [] { Mat3 m; m[0][0] = 1.0 / std::sqrt(2.0); m[1][1] = -1.0 / std::sqrt(2.0); return m; }(),
      [] { Mat3 m; double s = 1.0 / std::sqrt(6.0); m[0][0] = s; m[1][1] = s; m[2][2] = -2.0 * s; return m; }(),
  };
  return basis;
}

// eigenvalue range of the gradient-quadratic form 2 f_E(Q, .) on the 15-dim gradient space
void elastic_form_extremes(const MaterialConstants& mc, const Mat3& Q, double& lmin, double& lmax) {
  const Mat3* basis = s0_basis();
  const int n = 15;
  auto unit = [&](int idx) {
    GradQ p;
    p.g[idx / 5] = basis[idx % 5];
    return p;
  };
  auto fe = [&](const GradQ& p) { return f_E_density(mc, Q, p); };
  std::vector<double> h(n * n, 0.0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = 2.0 * fe(unit(i));
    h[i * n + i] = diag[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      GradQ p = unit(i);
      GradQ q = unit(j);
      GradQ s;
      for (int k = 0; k < 3; ++k) s.g[k] = p.g[k] + q.g[k];
      double hij = fe(s) - 0.5 * diag[i] - 0.5 * diag[j];
      h[i * n + j] = hij;
      h[j * n + i] = hij;
    }
  jacobi_extremes(h, n, lmin, lmax);
}

}  // namespace

Mat3 sample_s_delta(const BulkConstants& bc, Rng& rng) {
  Vec3 u = rng.unit_vector();
  Mat3 base = uniaxial_from_director(u, bc.s_plus);
  Mat3 w = rng.s0_tensor();
  double wn = frob_norm(w);
  double target = s_delta_radius(bc) * rng.uniform();
  if (wn > 1e-12) base += (target / wn) * w;
  return base;
}

BulkConstants make_bulk(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw std::invalid_argument("make_bulk: a, b, c must be positive");
  BulkConstants bc;
  bc.a = a;
  bc.b = b;
  bc.c = c;
  bc.s_plus = (b + std::sqrt(b * b + 24.0 * a * c)) / (4.0 * c);
  bc.lambda = std::min(bc.s_plus * b, 3.0 * a);
  bc.f_tilde_min = f_tilde_uniaxial_min_analytic(a, b, c, bc.s_plus);
  double numeric = bulk_min_by_descent(bc);
  if (std::fabs(numeric - bc.f_tilde_min) > 1e-8 * (1.0 + std::fabs(bc.f_tilde_min)))
    throw std::runtime_error("make_bulk: analytic bulk minimum disagrees with descent minimization");
  return bc;
}

ElasticConstants make_elastic(double L1, double L2, double L3, double L4, double L, const BulkConstants& bulk) {
  ElasticConstants el;
  el.L1 = L1;
  el.L2 = L2;
  el.L3 = L3;
  el.L4 = L4;
  el.L = L;
  el.L1_tilde = (L4 >= 0.0) ? L1 - (2.0 * bulk.s_plus / 3.0) * L4 : L1 + (4.0 * bulk.s_plus / 3.0) * L4;

  MaterialConstants probe{bulk, el};
  const int nq = 160;
  Rng rng(0xc0e7c1f1ull);
  double amin = 0.0, amax = 0.0;
  for (int k = 0; k < nq; ++k) {
    Mat3 q = (k == 0) ? uniaxial_from_director(Vec3{{0, 0, 1}}, bulk.s_plus) : sample_s_delta(bulk, rng);
    double lmin, lmax;
    elastic_form_extremes(probe, q, lmin, lmax);
    if (k == 0 || lmin < amin) amin = lmin;
    if (k == 0 || lmax > amax) amax = lmax;
  }
  el.alpha = amin;
  el.Lambda_up = amax;
  el.alpha_samples = nq;
  return el;
}

MaterialConstants make_material(double a, double b, double c, double L1, double L2, double L3, double L4, double L) {
  MaterialConstants mc;
  mc.bulk = make_bulk(a, b, c);
  mc.el = make_elastic(L1, L2, L3, L4, L, mc.bulk);
  return mc;
}

MaterialConstants default_material(double L) { return make_material(1, 1, 1, 1, 0.2, 0.1, 0.3, L); }

CoercivityResult check_coercivity(double L1, double L2, double L3, double L4, const BulkConstants& bulk) {
  ElasticConstants el = make_elastic(L1, L2, L3, L4, 1.0, bulk);
  CoercivityResult r;
  r.alpha = el.alpha;
  r.samples = el.alpha_samples;
  r.ok = el.alpha > 0.0;
  return r;
}

}  // namespace qlc
