#pragma once
#include <array>

#include "qlc/mat3.hpp"

namespace qlc {

// Order parameter: symmetric traceless 3x3 (element of S0).
using QTensor = Mat3;

bool is_symmetric(const Mat3& m, double tol = 1e-14);
bool is_traceless(const Mat3& m, double tol = 1e-14);

// s_plus * (u (x) u - I/3); throws std::invalid_argument unless |u| = 1 to 1e-12.
QTensor uniaxial_from_director(const Vec3& u, double s_plus);

struct EigenSystem {
  std::array<double, 3> eigenvalues;  // ascending
  Mat3 rotation;                      // columns = eigenvectors, orthonormal, det = +1
};

// Closed-form symmetric 3x3 eigensolver (trigonometric roots + one Newton polish),
// deterministic ordering and signs:
//   - eigenvalues ascending; gaps below 1e-9*|Q| are ties, tied pairs ordered
//     lexicographically by eigenvector
//   - each eigenvector's largest-|entry| component is made positive (first index wins
//     on equal magnitude); the last column is then negated if needed so det = +1
EigenSystem eigen_decompose(const Mat3& q);

inline Mat3 reconstruct(const EigenSystem& e) {
  Mat3 d = Mat3::diag(e.eigenvalues[0], e.eigenvalues[1], e.eigenvalues[2]);
  return mul(e.rotation, mul(d, transpose(e.rotation)));
}

}  // namespace qlc
