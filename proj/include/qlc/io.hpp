#pragma once

#include <string>

#include "qlc/solver.hpp"

namespace qlc {

struct Snapshot {
  Grid grid;
  TensorField Q;
  VectorField v;
  Snapshot(const Grid& g) : grid(g), Q(g), v(g) {}
};

// Point-value snapshot. Header x,y(,z),Q11,Q12,Q13,Q22,Q23,v1,v2,v3, one row per grid
// point in index order, every number printed with %.17g so doubles round-trip exactly.
// Q33 is implied by tracelessness and not stored.
void write_snapshot_csv(const std::string& path, const TensorField& Q, const VectorField& v);

// Rebuilds the grid from the file itself: dim from the header, n from the row count,
// spacing from the second row's first coordinate. Derivative scheme defaults to
// spectral (the CSV does not record it). Throws std::runtime_error on malformed input.
Snapshot read_snapshot_csv(const std::string& path);

// Versioned binary checkpoint of a full SimState, resumable. Layout (native-endian):
//   magic "QLCK", u32 version = 1,
//   i32 dim, i32 n, f64 length, i32 scheme, i32 system, f64 t, i64 step_count,
//   f64 a, b, c, L1, L2, L3, L4, L,
//   five Q component arrays then three v component arrays, npts f64 each, index order.
// Derived material data are recomputed on load.
void write_checkpoint(const std::string& path, const SimState& s);
SimState read_checkpoint(const std::string& path);

// Energy ledger CSV, columns exactly
//   t,E_elastic,E_bulk_over_L,E_kinetic,E_total,dissipation_H,dissipation_gradv,identity_residual
// in %.17g. Equal rows serialize to identical bytes.
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
EnergyLedger read_ledger_csv(const std::string& path);

// Largest eigenvalue of Q and its (deterministically gauged) unit eigenvector per
// point: columns x,y(,z),lambda_max,u1,u2,u3.
void write_director_csv(const std::string& path, const TensorField& Q);

}  // namespace qlc
