#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qlc {

enum class Scheme { spectral, central2 };

// Periodic torus, equispaced points x_a = i_a * h, h = length / n, identical per axis.
// Storage is row-major with axis 0 contiguous: idx = (i2 * n + i1) * n + i0 (i2 = 0 in 2D).
struct Grid {
  int dim = 2;
  int n = 32;
  double length = 0.0;  // set by make_grid (default 2*pi)
  Scheme scheme = Scheme::spectral;

  int npts() const { return dim == 2 ? n * n : n * n * n; }
  double h() const { return length / n; }
  double cell_volume() const;
  std::array<int, 3> unpack(int idx) const {
    if (dim == 2) return {idx % n, idx / n, 0};
    return {idx % n, (idx / n) % n, idx / (n * n)};
  }
  std::array<double, 3> point(int idx) const {
    auto i = unpack(idx);
    return {i[0] * h(), i[1] * h(), i[2] * h()};
  }
  bool same_layout(const Grid& o) const { return dim == o.dim && n == o.n && length == o.length; }
};

Grid make_grid(int dim, int n, double length, Scheme scheme);
Grid make_grid(int dim, int n, Scheme scheme);  // length 2*pi

// Unnormalized forward DFT; inverse applies 1/N so inverse(forward(f)) = f.
std::vector<std::complex<double>> fft_forward(const Grid& g, const std::vector<double>& f);
std::vector<double> fft_inverse(const Grid& g, std::vector<std::complex<double>> fhat);

// Scheme-aware first derivative along axis (0-based). Spectral: ik multiply with the
// Nyquist mode zeroed. central2: standard periodic 3-point stencil.
std::vector<double> derivative(const Grid& g, const std::vector<double>& f, int axis);

// Scheme-aware Laplacian (spectral -|k|^2, central2 second-difference stencil).
std::vector<double> laplacian_scalar(const Grid& g, const std::vector<double>& f);

// Solves (1 - coeff * Laplacian) u = f in Fourier space using the scheme's exact
// Laplacian symbol, so for central2 it inverts the stencil operator bit-consistently.
void helmholtz_invert(const Grid& g, std::vector<double>& f, double coeff);

// Zeroes all modes with any |k_a| > n/3 (2/3-rule). No-op for central2.
void dealias_23(const Grid& g, std::vector<double>& f);

// Modewise projector I - kk^T/|k|^2 using scheme-consistent wavenumbers (sin(kh)/h for
// central2, so the stencil divergence of the output also vanishes); zero mode untouched.
void leray_scalar3(const Grid& g, std::vector<double>& v0, std::vector<double>& v1,
                   std::vector<double>& v2);

// Solves laplace u = f modewise with the scheme's symbol; the zero mode (mean) is
// set to zero, so f must have zero mean for consistency.
void poisson_solve(const Grid& g, std::vector<double>& f);

double integrate(const Grid& g, const std::vector<double>& f);

}  // namespace qlc
