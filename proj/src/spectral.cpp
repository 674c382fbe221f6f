#include "qlc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qlc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW's planner is not reentrant; plans are cached per (dim, n, sign) and created
// with FFTW_UNALIGNED so they can execute on any caller buffer.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(const Grid& g, int sign) {
  static std::map<std::array<int, 3>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  std::array<int, 3> key{g.dim, g.n, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(g.npts());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = g.dim == 2 ? fftw_plan_dft_2d(g.n, g.n, buf, buf, sign, flags)
                           : fftw_plan_dft_3d(g.n, g.n, g.n, buf, buf, sign, flags);
  if (!p) throw std::runtime_error("FFT planning failed");
  cache.emplace(key, p);
  return p;
}

void execute(const Grid& g, int sign, std::complex<double>* data) {
  fftw_plan p = plan_for(g, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
}

// Signed integer mode index for position m in 0..n-1.
inline int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

struct Wavenumbers {
  // k[a][m]: physical wavenumber along axis a at mode position m.
  // ktilde: scheme-consistent first-derivative wavenumber (== k for spectral).
  // lap[a][m]: per-axis Laplacian symbol contribution (negative semidefinite).
  std::vector<double> k, ktilde, lap;
  int n;
  double at(const std::vector<double>& v, int m) const { return v[m]; }
};

Wavenumbers wavenumbers(const Grid& g) {
  Wavenumbers w;
  w.n = g.n;
  w.k.resize(g.n);
  w.ktilde.resize(g.n);
  w.lap.resize(g.n);
  double h = g.h();
  for (int m = 0; m < g.n; ++m) {
    double k = kTwoPi * signed_mode(m, g.n) / g.length;
    w.k[m] = k;
    if (g.scheme == Scheme::spectral) {
      w.ktilde[m] = (2 * m == g.n) ? 0.0 : k;  // Nyquist has no odd-derivative content
      w.lap[m] = -k * k;
    } else {
      w.ktilde[m] = std::sin(k * h) / h;
      w.lap[m] = -(2.0 - 2.0 * std::cos(k * h)) / (h * h);
    }
  }
  return w;
}

}  // namespace

double Grid::cell_volume() const {
  double h3 = h();
  return dim == 2 ? h3 * h3 : h3 * h3 * h3;
}

Grid make_grid(int dim, int n, double length, Scheme scheme) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid dim must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid n must be even and >= 8");
  if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
  Grid g;
  g.dim = dim;
  g.n = n;
  g.length = length;
  g.scheme = scheme;
  return g;
}

Grid make_grid(int dim, int n, Scheme scheme) { return make_grid(dim, n, kTwoPi, scheme); }

std::vector<std::complex<double>> fft_forward(const Grid& g, const std::vector<double>& f) {
  std::vector<std::complex<double>> out(f.begin(), f.end());
  execute(g, FFTW_FORWARD, out.data());
  return out;
}

std::vector<double> fft_inverse(const Grid& g, std::vector<std::complex<double>> fhat) {
  execute(g, FFTW_BACKWARD, fhat.data());
  std::vector<double> out(fhat.size());
  double inv_n = 1.0 / g.npts();
  for (size_t i = 0; i < fhat.size(); ++i) out[i] = fhat[i].real() * inv_n;
  return out;
}

std::vector<double> derivative(const Grid& g, const std::vector<double>& f, int axis) {
  if (axis < 0 || axis >= 3) throw std::invalid_argument("derivative axis out of range");
  int npts = g.npts();
  std::vector<double> out(npts, 0.0);
  if (axis >= g.dim) return out;  // fields are constant along absent axes

  if (g.scheme == Scheme::central2) {
    int n = g.n;
    double inv2h = 1.0 / (2.0 * g.h());
    int stride = axis == 0 ? 1 : (axis == 1 ? n : n * n);
    for (int idx = 0; idx < npts; ++idx) {
      auto i = g.unpack(idx);
      int ia = i[axis];
      int up = idx + (ia + 1 == n ? stride * (1 - n) : stride);
      int dn = idx + (ia == 0 ? stride * (n - 1) : -stride);
      out[idx] = (f[up] - f[dn]) * inv2h;
    }
    return out;
  }

  Wavenumbers w = wavenumbers(g);
  auto fhat = fft_forward(g, f);
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    fhat[idx] *= std::complex<double>(0.0, w.ktilde[m[axis]]);
  }
  return fft_inverse(g, std::move(fhat));
}

std::vector<double> laplacian_scalar(const Grid& g, const std::vector<double>& f) {
  int npts = g.npts();
  if (g.scheme == Scheme::central2) {
    std::vector<double> out(npts, 0.0);
    int n = g.n;
    double invh2 = 1.0 / (g.h() * g.h());
    for (int axis = 0; axis < g.dim; ++axis) {
      int stride = axis == 0 ? 1 : (axis == 1 ? n : n * n);
      for (int idx = 0; idx < npts; ++idx) {
        auto i = g.unpack(idx);
        int ia = i[axis];
        int up = idx + (ia + 1 == n ? stride * (1 - n) : stride);
        int dn = idx + (ia == 0 ? stride * (n - 1) : -stride);
        out[idx] += (f[up] - 2.0 * f[idx] + f[dn]) * invh2;
      }
    }
    return out;
  }
  Wavenumbers w = wavenumbers(g);
  auto fhat = fft_forward(g, f);
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    double sym = w.lap[m[0]] + w.lap[m[1]] + (g.dim == 3 ? w.lap[m[2]] : 0.0);
    fhat[idx] *= sym;
  }
  return fft_inverse(g, std::move(fhat));
}

void helmholtz_invert(const Grid& g, std::vector<double>& f, double coeff) {
  Wavenumbers w = wavenumbers(g);
  auto fhat = fft_forward(g, f);
  int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    double sym = w.lap[m[0]] + w.lap[m[1]] + (g.dim == 3 ? w.lap[m[2]] : 0.0);
    fhat[idx] /= (1.0 - coeff * sym);
  }
  f = fft_inverse(g, std::move(fhat));
}

void poisson_solve(const Grid& g, std::vector<double>& f) {
  Wavenumbers w = wavenumbers(g);
  auto fhat = fft_forward(g, f);
  int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    double sym = w.lap[m[0]] + w.lap[m[1]] + (g.dim == 3 ? w.lap[m[2]] : 0.0);
    fhat[idx] = (sym == 0.0) ? 0.0 : fhat[idx] / sym;
  }
  f = fft_inverse(g, std::move(fhat));
}

void dealias_23(const Grid& g, std::vector<double>& f) {
  if (g.scheme != Scheme::spectral) return;
  int cutoff = g.n / 3;
  auto fhat = fft_forward(g, f);
  int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    bool kill = false;
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(signed_mode(m[a], g.n)) > cutoff) kill = true;
    if (kill) fhat[idx] = 0.0;
  }
  f = fft_inverse(g, std::move(fhat));
}

void leray_scalar3(const Grid& g, std::vector<double>& v0, std::vector<double>& v1,
                   std::vector<double>& v2) {
  Wavenumbers w = wavenumbers(g);
  auto h0 = fft_forward(g, v0);
  auto h1 = fft_forward(g, v1);
  auto h2 = fft_forward(g, v2);
  int npts = g.npts();
  for (int idx = 0; idx < npts; ++idx) {
    auto m = g.unpack(idx);
    double k0 = w.ktilde[m[0]];
    double k1 = w.ktilde[m[1]];
    double k2 = g.dim == 3 ? w.ktilde[m[2]] : 0.0;
    double k2sum = k0 * k0 + k1 * k1 + k2 * k2;
    if (k2sum == 0.0) continue;
    std::complex<double> kdot = (k0 * h0[idx] + k1 * h1[idx] + k2 * h2[idx]) / k2sum;
    h0[idx] -= k0 * kdot;
    h1[idx] -= k1 * kdot;
    h2[idx] -= k2 * kdot;
  }
  v0 = fft_inverse(g, std::move(h0));
  v1 = fft_inverse(g, std::move(h1));
  v2 = fft_inverse(g, std::move(h2));
}

double integrate(const Grid& g, const std::vector<double>& f) {
  double s = std::accumulate(f.begin(), f.end(), 0.0);
  return s * g.cell_volume();
}

}  // namespace qlc
