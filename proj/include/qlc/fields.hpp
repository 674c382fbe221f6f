#pragma once

#include <array>
#include <vector>

#include "qlc/energy.hpp"
#include "qlc/qtensor.hpp"
#include "qlc/rng.hpp"
#include "qlc/spectral.hpp"

namespace qlc {

// Symmetric traceless tensor field stored as the five independent entries
// (Q11, Q12, Q13, Q22, Q23); Q33 is reconstructed, so every value is in S0 by
// construction. set() reads the upper triangle of its argument.
struct TensorField {
  Grid grid;
  std::array<std::vector<double>, 5> c;

  TensorField() = default;
  explicit TensorField(const Grid& g);
  Mat3 get(int idx) const;
  void set(int idx, const Mat3& m);
};

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> c;

  VectorField() = default;
  explicit VectorField(const Grid& g);
  Vec3 get(int idx) const;
  void set(int idx, const Vec3& v);
};

// General 3x3-valued field, entry (i, j) in c[3 * i + j].
struct MatrixField {
  Grid grid;
  std::array<std::vector<double>, 9> c;

  MatrixField() = default;
  explicit MatrixField(const Grid& g);
  Mat3 get(int idx) const;
  void set(int idx, const Mat3& m);
};

// Per-axis derivative fields of a tensor field; d[k] holds the k-th partial
// (itself symmetric traceless). Absent axes are zero fields.
struct TensorGrad {
  std::array<TensorField, 3> d;
  GradQ at(int idx) const { return GradQ{{d[0].get(idx), d[1].get(idx), d[2].get(idx)}}; }
};

TensorGrad gradient(const TensorField& f);
// (grad v)_ij = d_j v_i.
MatrixField gradient(const VectorField& f);

struct FlowSplit {
  MatrixField omega;   // (grad v - grad v^T) / 2
  MatrixField strain;  // (grad v + grad v^T) / 2
};
FlowSplit vorticity_strain_split(const VectorField& v);

VectorField leray_project(const VectorField& v);
std::vector<double> divergence(const VectorField& v);
double max_divergence(const VectorField& v);

TensorField laplacian(const TensorField& f);
VectorField laplacian(const VectorField& f);

double norm_L2(const TensorField& f);
double norm_L2(const VectorField& f);
double norm_H1(const TensorField& f);
double norm_H1(const VectorField& f);

void dealias(TensorField& f);
void dealias(VectorField& f);

// y += a * x  (grids must match)
void add_scaled(TensorField& y, double a, const TensorField& x);
void add_scaled(VectorField& y, double a, const VectorField& x);
void scale(TensorField& f, double a);
void scale(VectorField& f, double a);

// Band-limited random fields: sums of cos(k.x + phase) over integer modes with
// |k_a| <= kmax, Gaussian amplitudes scaled to max pointwise norm ~ amp.
TensorField random_smooth_tensor_field(const Grid& g, Rng& rng, int kmax, double amp);
VectorField random_smooth_vector_field(const Grid& g, Rng& rng, int kmax, double amp,
                                       bool divergence_free);

}  // namespace qlc
