#include <doctest.h>

#include <cstring>

#include "qlc/qtensor.hpp"
#include "qlc/rng.hpp"

using namespace qlc;

namespace {
Mat3 e1e2() {
  Mat3 m;
  m[0][1] = 1.0;
  return m;
}
}  // namespace

TEST_CASE("symmetrize_traceless basics") {
  CHECK(max_abs(symmetrize_traceless(Mat3::identity())) == 0.0);

  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    Mat3 q = rng.s0_tensor();
    CHECK(max_abs(symmetrize_traceless(q) - q) <= 1e-15);
  }

  Mat3 p = symmetrize_traceless(e1e2());
  Mat3 want;
  want[0][1] = want[1][0] = 0.5;
  CHECK(max_abs(p - want) == 0.0);
}

TEST_CASE("symmetrize_traceless is the orthogonal projection onto S0") {
  Rng rng(12);
  for (int k = 0; k < 50; ++k) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = rng.normal();
    Mat3 res = m - symmetrize_traceless(m);
    Mat3 s = rng.s0_tensor();
    CHECK(std::fabs(frobenius(res, s)) <= 1e-13 * (1.0 + frob_norm(m) * frob_norm(s)));
  }
}

TEST_CASE("frobenius inner product") {
  Mat3 qp = uniaxial_from_director(Vec3{{0, 0, 1}}, 1.5);
  CHECK(frobenius(qp, qp) == doctest::Approx(1.5).epsilon(1e-14));

  Mat3 a = Mat3::diag(1, 1, -2), zero;
  CHECK(frobenius(a, zero) == 0.0);
  CHECK(frobenius(Mat3::diag(1, 1, -2), Mat3::diag(1, -1, 0)) == 0.0);
}

TEST_CASE("lie bracket") {
  Rng rng(13);
  Mat3 a = rng.s0_tensor();
  CHECK(max_abs(lie_bracket(a, a)) == 0.0);
  CHECK(max_abs(lie_bracket(Mat3::diag(1, -1, 0), Mat3::diag(0, 1, -1))) == 0.0);

  Mat3 d = Mat3::diag(1, -1, 0);
  Mat3 br = lie_bracket(d, e1e2());
  CHECK(max_abs(br - 2.0 * e1e2()) == 0.0);
}

TEST_CASE("bracket adjoint identities") {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    Mat3 a = rng.s0_tensor(), b = rng.s0_tensor(), f;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f[i][j] = rng.normal();
    double lhs = frobenius(lie_bracket(a, f), b);
    double mid = frobenius(f, lie_bracket(a, b));
    double rhs = -frobenius(transpose(f), lie_bracket(a, b));
    double scale = 1.0 + frob_norm(a) * frob_norm(b) * frob_norm(f);
    CHECK(std::fabs(lhs - mid) <= 1e-12 * scale);
    CHECK(std::fabs(mid - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("uniaxial_from_director") {
  Mat3 q = uniaxial_from_director(Vec3{{0, 0, 1}}, 1.5);
  CHECK(max_abs(q - Mat3::diag(-0.5, -0.5, 1.0)) <= 1e-15);

  Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    Vec3 u = rng.unit_vector();
    Mat3 qu = uniaxial_from_director(u, 1.5);
    Mat3 qm = uniaxial_from_director(-1.0 * u, 1.5);
    CHECK(max_abs(qu - qm) == 0.0);
    CHECK(frobenius(qu, qu) == doctest::Approx(2.0 / 3.0 * 1.5 * 1.5).epsilon(1e-13));
  }

  CHECK_THROWS(uniaxial_from_director(Vec3{{0, 0, 1.001}}, 1.5));
}

TEST_CASE("eigen: fixed cases") {
  Mat3 zero;
  EigenSystem ez = eigen_decompose(zero);
  CHECK(ez.eigenvalues[0] == 0.0);
  CHECK(ez.eigenvalues[2] == 0.0);
  CHECK(max_abs(ez.rotation - Mat3::identity()) == 0.0);

  Mat3 qp = uniaxial_from_director(Vec3{{0, 0, 1}}, 1.5);
  EigenSystem ep = eigen_decompose(qp);
  CHECK(ep.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(ep.eigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(ep.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(max_abs(reconstruct(ep) - qp) <= 1e-12);
}

TEST_CASE("eigen: reconstruction, orthonormality, handedness on random S0") {
  Rng rng(16);
  for (int k = 0; k < 1000; ++k) {
    double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
    Mat3 q = rng.s0_tensor(scale);
    EigenSystem e = eigen_decompose(q);
    CHECK(e.eigenvalues[0] <= e.eigenvalues[1]);
    CHECK(e.eigenvalues[1] <= e.eigenvalues[2]);
    CHECK(std::fabs(e.eigenvalues[0] + e.eigenvalues[1] + e.eigenvalues[2]) <= 1e-12 * (1.0 + frob_norm(q)));
    CHECK(max_abs(reconstruct(e) - q) <= 1e-10 * (1.0 + frob_norm(q)));
    Mat3 rtr = mul(transpose(e.rotation), e.rotation);
    CHECK(max_abs(rtr - Mat3::identity()) <= 1e-12);
    CHECK(det(e.rotation) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eigen: deterministic, including degenerate ties") {
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    Mat3 q = k % 3 == 0 ? uniaxial_from_director(rng.unit_vector(), 1.5) : rng.s0_tensor();
    EigenSystem a = eigen_decompose(q);
    EigenSystem b = eigen_decompose(q);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }
  // exactly degenerate pair with non-axis eigenvectors
  Vec3 u = normalized(Vec3{{1.0, 2.0, -0.5}});
  Mat3 q = uniaxial_from_director(u, 1.5);
  EigenSystem e = eigen_decompose(q);
  CHECK(e.eigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(max_abs(reconstruct(e) - q) <= 1e-11);
  // top eigenvector matches the director up to sign
  Vec3 top{{e.rotation[0][2], e.rotation[1][2], e.rotation[2][2]}};
  CHECK(std::fabs(std::fabs(dot(top, u)) - 1.0) <= 1e-12);
}
