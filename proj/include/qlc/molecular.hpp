#pragma once

#include "qlc/fields.hpp"
#include "qlc/uniaxial.hpp"

namespace qlc {

// Variational molecular field of the distortion energy:
//   H = sym0( sum_k d_k P[k] - df_E/dQ ),  P[k] = df_E/d(d_k Q).
TensorField molecular_field_biaxial(const TensorField& qf, const MaterialConstants& mc);

// H + (1/L) g_B, added pointwise on top of molecular_field_biaxial.
TensorField full_molecular_field(const TensorField& qf, const MaterialConstants& mc);

// sigma_ij = -P[j](k,l) d_i Q_kl per point; generally not symmetric.
MatrixField distortion_stress_field(const TensorField& qf, const MaterialConstants& mc);

// Molecular field constrained to the uniaxial manifold: the pointwise tangential
// projection of the unconstrained variational field, assembled in divergence form.
// Every grid value must be within 1e-8 of S_*; values are renormalized onto the
// manifold internally before differentiation. Throws std::domain_error otherwise.
TensorField molecular_field_uniaxial(const TensorField& qf, const MaterialConstants& mc);

// Pointwise |LHS - RHS| of the cubic gradient decomposition, for fields on S_*.
std::vector<double> third_identity_residual(const TensorField& qf, const BulkConstants& bc);

double total_elastic_energy(const TensorField& qf, const MaterialConstants& mc);
double total_bulk_energy(const TensorField& qf, const BulkConstants& bc);
double kinetic_energy(const VectorField& vf);

// elastic = integral f_E, bulk_over_L = integral f_B / L, kinetic = integral |v|^2 / 2.
EnergyBreakdown total_energy(const TensorField& qf, const VectorField& vf,
                             const MaterialConstants& mc);

}  // namespace qlc
