#pragma once

#include <cstdint>
#include <vector>

#include "qlc/molecular.hpp"

namespace qlc {

enum class SystemKind { biaxial, uniaxial };
enum class TimeScheme { imex, explicit_rk2, picard };

struct SimState {
  double t = 0.0;
  std::int64_t step_count = 0;
  TensorField Q;
  VectorField v;
  SystemKind system = SystemKind::biaxial;
  MaterialConstants material;
};

struct SchemeConfig {
  double dt = 0.0;  // <= 0 selects the automatic step size
  TimeScheme scheme = TimeScheme::imex;
  double picard_tol = 1e-9;
  int picard_max_iters = 40;
  int renormalize_every = 1;  // uniaxial mode
};

struct LedgerRow {
  double t = 0.0;
  double e_elastic = 0.0;
  double e_bulk_over_L = 0.0;
  double e_kinetic = 0.0;
  double e_total = 0.0;
  double dissipation_H = 0.0;      // integral |H + g_B/L|^2 (biaxial) or |H|^2 (uniaxial)
  double dissipation_gradv = 0.0;  // integral |grad v|^2
  double identity_residual = 0.0;  // |(E_n+1 - E_n)/dt + D_H(t_n) + D_v(t_n)|, 0 on the first row
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;
};

struct StepStats {
  double dt_used = 0.0;
  int picard_iters = 0;
  int halvings = 0;
  std::vector<double> picard_diffs;  // successive H1 x L2 iterate differences
};

struct Rhs {
  TensorField dQ;
  VectorField dv;  // before Leray projection
};

// Automatic step size: advective CFL (0.25 h / max|v|), an explicit-diffusion bound for
// the terms the scheme treats explicitly, and in biaxial mode the bulk limit 0.5 L / a.
double auto_dt(const SimState& s, TimeScheme scheme);

Rhs rhs_biaxial(const SimState& s);
Rhs rhs_uniaxial(const SimState& s);

// One time step in place. Throws std::runtime_error on NaN/Inf or when the Picard
// iteration keeps failing to contract after 5 step halvings.
StepStats step(SimState& s, const SchemeConfig& cfg);

// Ledger row for the current state (identity_residual left at 0).
LedgerRow energy_report(const SimState& s);

// Appends an energy_report row, computing the identity residual against the previous
// row with time increment dt.
void ledger_append(EnergyLedger& ledger, const SimState& s, double dt);

// Pressure recovered diagnostically from the unprojected momentum rate: solves
// laplace P = div(dv/dt) modewise; zero mean.
std::vector<double> recover_pressure(const SimState& s);

// integral of |grad Q|^3 + |v|^3 (local concentration diagnostic)
double concentration_L3(const SimState& s);

// Initial data presets. All return divergence-free v; in uniaxial mode Q is
// renormalized onto S_* pointwise.
SimState init_constant_taylor_green(const Grid& g, const MaterialConstants& mc,
                                    SystemKind system, double v_amp);
SimState init_winding(const Grid& g, const MaterialConstants& mc, SystemKind system, int k_wind);
SimState init_perturbed(const Grid& g, const MaterialConstants& mc, SystemKind system, double eps,
                        std::uint64_t seed);

}  // namespace qlc
