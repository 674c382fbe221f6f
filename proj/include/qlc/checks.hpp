#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlc/solver.hpp"

namespace qlc {

struct CheckReport {
  std::string name;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // max_residual <= tolerance
  std::string provenance;
  std::uint64_t seed = 0;
};

// Registry names in canonical order.
const std::vector<std::string>& check_names();

// Runs one named check against the given constants; deterministic for a fixed seed.
// Throws std::invalid_argument for an unknown name.
CheckReport run_check(const std::string& name, const MaterialConstants& mc, std::uint64_t seed);

// Runs the whole registry in order; check k gets seed + k.
std::vector<CheckReport> run_all_checks(const MaterialConstants& mc, std::uint64_t seed);

// One JSON line: {"name":..., "samples":..., "max_residual":..., "tolerance":...,
// "passed":..., "seed":...}
std::string check_report_json(const CheckReport& r);

}  // namespace qlc
