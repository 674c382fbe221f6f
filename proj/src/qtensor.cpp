#include "qlc/qtensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlc {

bool is_symmetric(const Mat3& m, double tol) {
  return std::fabs(m[0][1] - m[1][0]) <= tol && std::fabs(m[0][2] - m[2][0]) <= tol &&
         std::fabs(m[1][2] - m[2][1]) <= tol;
}

bool is_traceless(const Mat3& m, double tol) {
  return std::fabs(trace(m)) <= tol * (1.0 + frob_norm(m));
}

QTensor uniaxial_from_director(const Vec3& u, double s_plus) {
  if (std::fabs(norm(u) - 1.0) > 1e-12) throw std::invalid_argument("uniaxial_from_director: director is not unit");
  Mat3 q = outer(u, u);
  q[0][0] -= 1.0 / 3.0;
  q[1][1] -= 1.0 / 3.0;
  q[2][2] -= 1.0 / 3.0;
  return s_plus * q;
}

namespace {

// lexicographic vector order for tie-breaking
bool lex_less(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

Vec3 sign_normalize(Vec3 v) {
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

// eigenvector for the most isolated eigenvalue: largest cross product of rows of Q - lam I
Vec3 isolated_eigenvector(const Mat3& q, double lam) {
  Vec3 r[3];
  for (int i = 0; i < 3; ++i) {
    r[i] = Vec3{{q[i][0], q[i][1], q[i][2]}};
    r[i][i] -= lam;
  }
  Vec3 c01 = cross(r[0], r[1]), c02 = cross(r[0], r[2]), c12 = cross(r[1], r[2]);
  double n01 = dot(c01, c01), n02 = dot(c02, c02), n12 = dot(c12, c12);
  Vec3 best = c01;
  double bn = n01;
  if (n02 > bn) {
    best = c02;
    bn = n02;
  }
  if (n12 > bn) {
    best = c12;
    bn = n12;
  }
  if (bn < 1e-300) {
    // (Q - lam I) is numerically rank 0; any direction works, pick a fixed one
    return Vec3{{1.0, 0.0, 0.0}};
  }
  return normalized(best);
}

}  // namespace

EigenSystem eigen_decompose(const Mat3& qin) {
  Mat3 q = symmetrize_traceless(qin);  // solver assumes S0; projection is a no-op there
  double fn = frob_norm(q);
  if (fn < 1e-13) return EigenSystem{{0.0, 0.0, 0.0}, Mat3::identity()};

  // characteristic polynomial of traceless symmetric Q: lam^3 + p lam + r = 0
  double p = -0.5 * frobenius(q, q);
  double r = -det(q);
  double m = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * r / (p * m);  // = (3r)/(2p) * sqrt(-3/p)
  arg = std::clamp(arg, -1.0, 1.0);
  double theta = std::acos(arg) / 3.0;
  std::array<double, 3> lam;
  for (int k = 0; k < 3; ++k) lam[k] = m * std::cos(theta - 2.0943951023931954923 * k);
  std::sort(lam.begin(), lam.end());
  for (auto& l : lam) {
    double f = (l * l + p) * l + r;
    double fp = 3.0 * l * l + p;
    if (std::fabs(fp) > 1e-14 * fn * fn) l -= f / fp;
  }
  std::sort(lam.begin(), lam.end());

  // most isolated eigenvalue first, the remaining pair by a 2x2 rotation in its complement
  double gap_lo = lam[1] - lam[0], gap_hi = lam[2] - lam[1];
  int iso = (gap_lo >= gap_hi) ? 0 : 2;
  Vec3 v = isolated_eigenvector(q, lam[iso]);

  int jmin = 0;
  for (int j = 1; j < 3; ++j)
    if (std::fabs(v[j]) < std::fabs(v[jmin])) jmin = j;
  Vec3 t{{0, 0, 0}};
  t[jmin] = 1.0;
  t = normalized(t - dot(v, t) * v);
  Vec3 s = cross(v, t);
  double stt = dot(t, mul(q, t)), sts = dot(t, mul(q, s)), sss = dot(s, mul(q, s));
  double ang = 0.5 * std::atan2(2.0 * sts, stt - sss);
  Vec3 w1 = std::cos(ang) * t + std::sin(ang) * s;
  Vec3 w2 = -std::sin(ang) * t + std::cos(ang) * s;
  double mu1 = dot(w1, mul(q, w1)), mu2 = dot(w2, mul(q, w2));
  if (mu1 > mu2) {
    std::swap(w1, w2);
    std::swap(mu1, mu2);
  }

  std::array<Vec3, 3> vec;
  if (iso == 0) {
    vec = {v, w1, w2};
  } else {
    vec = {w1, w2, v};
  }
  for (auto& e : vec) e = sign_normalize(e);

  double tie = 1e-9 * fn;
  if (lam[1] - lam[0] < tie && lex_less(vec[1], vec[0])) {
    std::swap(vec[0], vec[1]);
    std::swap(lam[0], lam[1]);
  }
  if (lam[2] - lam[1] < tie && lex_less(vec[2], vec[1])) {
    std::swap(vec[1], vec[2]);
    std::swap(lam[1], lam[2]);
  }

  Mat3 rot;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rot[i][j] = vec[j][i];
  if (det(rot) < 0.0)
    for (int i = 0; i < 3; ++i) rot[i][2] = -rot[i][2];
  return EigenSystem{lam, rot};
}

}  // namespace qlc
