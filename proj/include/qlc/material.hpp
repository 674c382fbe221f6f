#pragma once
#include "qlc/mat3.hpp"

namespace qlc {

// Bulk potential constants a,b,c > 0 plus derived quantities.
//   s_plus      positive root of 2c s^2 - b s - 3a = 0, i.e. (b + sqrt(b^2+24ac))/(4c)
//   lambda      min(s_plus*b, 3a): Hessian lower bound on block directions at the minimizer
//   f_tilde_min min of the quartic bulk density over S0 (analytic, cross-checked numerically)
struct BulkConstants {
  double a = 1.0, b = 1.0, c = 1.0;
  double s_plus = 0.0;
  double lambda = 0.0;
  double f_tilde_min = 0.0;
};

// throws std::invalid_argument on non-positive a,b,c; std::runtime_error if the analytic
// bulk minimum disagrees with a descent-based minimization beyond 1e-8
BulkConstants make_bulk(double a, double b, double c);

inline double s_delta_radius(const BulkConstants& bc) { return 0.1 * bc.s_plus; }

// Elastic constants of the four-constant distortion energy plus derived data.
//   L1_tilde  coefficient of the |grad Q|^2 term in the repaired density:
//             L1 - (2 s_plus/3) L4 for L4 >= 0, L1 + (4 s_plus/3) L4 for L4 < 0
//   alpha     sampled coercivity constant: min over sampled Q in S_delta of the smallest
//             eigenvalue of the gradient-quadratic form (Rayleigh-polished)
//   Lambda_up sampled upper bound (largest eigenvalue over the same sweep)
struct ElasticConstants {
  double L1 = 1.0, L2 = 0.0, L3 = 0.0, L4 = 0.0;
  double L1_tilde = 1.0;
  double L = 1e-2;  // relaxation parameter of the rescaled bulk term
  double alpha = 0.0;
  double Lambda_up = 0.0;
  int alpha_samples = 0;
};

ElasticConstants make_elastic(double L1, double L2, double L3, double L4, double L, const BulkConstants& bulk);

struct MaterialConstants {
  BulkConstants bulk;
  ElasticConstants el;
};

MaterialConstants make_material(double a, double b, double c, double L1, double L2, double L3, double L4, double L);

// a=b=c=1 (s_plus = 1.5), L1=1, L2=0.2, L3=0.1, L4=0.3
MaterialConstants default_material(double L = 1e-2);

struct CoercivityResult {
  bool ok = false;
  double alpha = 0.0;
  int samples = 0;
};

// Numerical test of the coercivity condition: samples Q over S_delta, minimizes the
// gradient-quadratic form exactly in the gradient slot, reports the worst constant.
CoercivityResult check_coercivity(double L1, double L2, double L3, double L4, const BulkConstants& bulk);

// random point of S_delta: uniaxial base + symmetric traceless bump of norm <= delta
class Rng;
Mat3 sample_s_delta(const BulkConstants& bc, Rng& rng);

}  // namespace qlc
