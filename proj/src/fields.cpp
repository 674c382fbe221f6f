#include "qlc/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace qlc {

namespace {

void require_same(const Grid& a, const Grid& b) {
  if (!a.same_layout(b)) throw std::invalid_argument("field grids do not match");
}

}  // namespace

TensorField::TensorField(const Grid& g) : grid(g) {
  for (auto& v : c) v.assign(g.npts(), 0.0);
}

Mat3 TensorField::get(int idx) const {
  Mat3 m;
  m[0][0] = c[0][idx];
  m[0][1] = m[1][0] = c[1][idx];
  m[0][2] = m[2][0] = c[2][idx];
  m[1][1] = c[3][idx];
  m[1][2] = m[2][1] = c[4][idx];
  m[2][2] = -c[0][idx] - c[3][idx];
  return m;
}

void TensorField::set(int idx, const Mat3& m) {
  c[0][idx] = m[0][0];
  c[1][idx] = m[0][1];
  c[2][idx] = m[0][2];
  c[3][idx] = m[1][1];
  c[4][idx] = m[1][2];
}

VectorField::VectorField(const Grid& g) : grid(g) {
  for (auto& v : c) v.assign(g.npts(), 0.0);
}

Vec3 VectorField::get(int idx) const { return Vec3{{c[0][idx], c[1][idx], c[2][idx]}}; }

void VectorField::set(int idx, const Vec3& v) {
  c[0][idx] = v[0];
  c[1][idx] = v[1];
  c[2][idx] = v[2];
}

MatrixField::MatrixField(const Grid& g) : grid(g) {
  for (auto& v : c) v.assign(g.npts(), 0.0);
}

Mat3 MatrixField::get(int idx) const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = c[3 * i + j][idx];
  return m;
}

void MatrixField::set(int idx, const Mat3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[3 * i + j][idx] = m[i][j];
}

TensorGrad gradient(const TensorField& f) {
  TensorGrad out;
  for (int k = 0; k < 3; ++k) {
    out.d[k] = TensorField(f.grid);
    if (k >= f.grid.dim) continue;
    for (int comp = 0; comp < 5; ++comp) out.d[k].c[comp] = derivative(f.grid, f.c[comp], k);
  }
  return out;
}

MatrixField gradient(const VectorField& f) {
  MatrixField out(f.grid);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < f.grid.dim; ++j) out.c[3 * i + j] = derivative(f.grid, f.c[i], j);
  return out;
}

FlowSplit vorticity_strain_split(const VectorField& v) {
  MatrixField g = gradient(v);
  FlowSplit out{MatrixField(v.grid), MatrixField(v.grid)};
  int npts = v.grid.npts();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int idx = 0; idx < npts; ++idx) {
        double a = g.c[3 * i + j][idx];
        double b = g.c[3 * j + i][idx];
        out.omega.c[3 * i + j][idx] = 0.5 * (a - b);
        out.strain.c[3 * i + j][idx] = 0.5 * (a + b);
      }
  return out;
}

VectorField leray_project(const VectorField& v) {
  VectorField out = v;
  leray_scalar3(out.grid, out.c[0], out.c[1], out.c[2]);
  return out;
}

std::vector<double> divergence(const VectorField& v) {
  std::vector<double> out(v.grid.npts(), 0.0);
  for (int i = 0; i < v.grid.dim; ++i) {
    auto di = derivative(v.grid, v.c[i], i);
    for (size_t p = 0; p < out.size(); ++p) out[p] += di[p];
  }
  return out;
}

double max_divergence(const VectorField& v) {
  auto d = divergence(v);
  double m = 0.0;
  for (double x : d) m = std::max(m, std::fabs(x));
  return m;
}

TensorField laplacian(const TensorField& f) {
  TensorField out(f.grid);
  for (int comp = 0; comp < 5; ++comp) out.c[comp] = laplacian_scalar(f.grid, f.c[comp]);
  return out;
}

VectorField laplacian(const VectorField& f) {
  VectorField out(f.grid);
  for (int i = 0; i < 3; ++i) out.c[i] = laplacian_scalar(f.grid, f.c[i]);
  return out;
}

double norm_L2(const TensorField& f) {
  int npts = f.grid.npts();
  double s = 0.0;
  for (int idx = 0; idx < npts; ++idx) {
    Mat3 q = f.get(idx);
    s += frobenius(q, q);
  }
  return std::sqrt(s * f.grid.cell_volume());
}

double norm_L2(const VectorField& f) {
  int npts = f.grid.npts();
  double s = 0.0;
  for (int idx = 0; idx < npts; ++idx) {
    Vec3 v = f.get(idx);
    s += dot(v, v);
  }
  return std::sqrt(s * f.grid.cell_volume());
}

double norm_H1(const TensorField& f) {
  double s = norm_L2(f) * norm_L2(f);
  TensorGrad g = gradient(f);
  for (int k = 0; k < f.grid.dim; ++k) s += norm_L2(g.d[k]) * norm_L2(g.d[k]);
  return std::sqrt(s);
}

double norm_H1(const VectorField& f) {
  double s = norm_L2(f) * norm_L2(f);
  for (int j = 0; j < f.grid.dim; ++j) {
    VectorField dj(f.grid);
    for (int i = 0; i < 3; ++i) dj.c[i] = derivative(f.grid, f.c[i], j);
    s += norm_L2(dj) * norm_L2(dj);
  }
  return std::sqrt(s);
}

void dealias(TensorField& f) {
  for (auto& comp : f.c) dealias_23(f.grid, comp);
}

void dealias(VectorField& f) {
  for (auto& comp : f.c) dealias_23(f.grid, comp);
}

void add_scaled(TensorField& y, double a, const TensorField& x) {
  require_same(y.grid, x.grid);
  for (int comp = 0; comp < 5; ++comp)
    for (size_t p = 0; p < y.c[comp].size(); ++p) y.c[comp][p] += a * x.c[comp][p];
}

void add_scaled(VectorField& y, double a, const VectorField& x) {
  require_same(y.grid, x.grid);
  for (int comp = 0; comp < 3; ++comp)
    for (size_t p = 0; p < y.c[comp].size(); ++p) y.c[comp][p] += a * x.c[comp][p];
}

void scale(TensorField& f, double a) {
  for (auto& comp : f.c)
    for (double& x : comp) x *= a;
}

void scale(VectorField& f, double a) {
  for (auto& comp : f.c)
    for (double& x : comp) x *= a;
}

namespace {

struct ModeSet {
  // Integer wave vectors with |k_a| <= kmax, one per +/- pair, zero excluded.
  std::vector<std::array<int, 3>> k;
};

ModeSet half_modes(int dim, int kmax) {
  ModeSet ms;
  int zmax = dim == 3 ? kmax : 0;
  for (int k2 = -zmax; k2 <= zmax; ++k2)
    for (int k1 = -kmax; k1 <= kmax; ++k1)
      for (int k0 = -kmax; k0 <= kmax; ++k0) {
        if (k0 == 0 && k1 == 0 && k2 == 0) continue;
        // keep one representative of {k, -k}
        if (k2 < 0 || (k2 == 0 && (k1 < 0 || (k1 == 0 && k0 < 0)))) continue;
        ms.k.push_back({k0, k1, k2});
      }
  return ms;
}

}  // namespace

TensorField random_smooth_tensor_field(const Grid& g, Rng& rng, int kmax, double amp) {
  TensorField out(g);
  ModeSet ms = half_modes(g.dim, kmax);
  std::vector<Mat3> coef(ms.k.size());
  std::vector<double> phase(ms.k.size());
  for (size_t m = 0; m < ms.k.size(); ++m) {
    coef[m] = rng.s0_tensor();
    phase[m] = rng.uniform(0.0, 6.283185307179586);
  }
  int npts = g.npts();
  double peak = 0.0;
  std::vector<Mat3> vals(npts);
  double kb = 6.283185307179586 / g.length;
  for (int idx = 0; idx < npts; ++idx) {
    auto x = g.point(idx);
    Mat3 q;
    for (size_t m = 0; m < ms.k.size(); ++m) {
      double ph = kb * (ms.k[m][0] * x[0] + ms.k[m][1] * x[1] + ms.k[m][2] * x[2]) + phase[m];
      q += std::cos(ph) * coef[m];
    }
    vals[idx] = q;
    peak = std::max(peak, frob_norm(q));
  }
  double s = peak > 0.0 ? amp / peak : 0.0;
  for (int idx = 0; idx < npts; ++idx) out.set(idx, s * vals[idx]);
  return out;
}

VectorField random_smooth_vector_field(const Grid& g, Rng& rng, int kmax, double amp,
                                       bool divergence_free) {
  VectorField out(g);
  ModeSet ms = half_modes(g.dim, kmax);
  std::vector<Vec3> coef(ms.k.size());
  std::vector<double> phase(ms.k.size());
  for (size_t m = 0; m < ms.k.size(); ++m) {
    coef[m] = Vec3{{rng.normal(), rng.normal(), rng.normal()}};
    phase[m] = rng.uniform(0.0, 6.283185307179586);
  }
  int npts = g.npts();
  std::vector<Vec3> vals(npts);
  double peak = 0.0;
  double kb = 6.283185307179586 / g.length;
  for (int idx = 0; idx < npts; ++idx) {
    auto x = g.point(idx);
    Vec3 v{};
    for (size_t m = 0; m < ms.k.size(); ++m) {
      double ph = kb * (ms.k[m][0] * x[0] + ms.k[m][1] * x[1] + ms.k[m][2] * x[2]) + phase[m];
      v = v + std::cos(ph) * coef[m];
    }
    vals[idx] = v;
    peak = std::max(peak, norm(v));
  }
  double s = peak > 0.0 ? amp / peak : 0.0;
  for (int idx = 0; idx < npts; ++idx) out.set(idx, s * vals[idx]);
  if (divergence_free) out = leray_project(out);
  return out;
}

}  // namespace qlc
