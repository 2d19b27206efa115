#pragma once

// Finite-precision robustness: shift one control parameter by one unit in
// its last printed digit and re-evaluate Tr P, with and without the Δf
// computed at the unshifted optimum.

#include <array>

#include "noc.hpp"
#include "parallel.hpp"

namespace nocgf {

// Significant digits in the printed optimum of each parameter.
inline int printed_digits(const std::string& name) {
  if (name == "lambda" || name == "eta4") return 4;
  if (name == "d1" || name == "d4" || name == "c4") return 5;
  if (name == "d2" || name == "d3") return 2;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

// One unit in the last place of v printed with `digits` significant digits.
inline double last_place_step(double v, int digits) {
  if (v == 0 || digits < 1) throw ContractViolation("last_place_step: zero value or digits");
  const int e = static_cast<int>(std::floor(std::log10(std::abs(v))));
  return std::pow(10.0, e - (digits - 1));
}

inline double& param_ref(SweepParams1Q& p, const std::string& name) {
  if (name == "lambda") return p.lambda;
  if (name == "eta4") return p.eta4;
  throw ConfigError("parameter '" + name + "' does not apply to one-qubit gates");
}

inline double& param_ref(SweepParams2Q& p, const std::string& name) {
  if (name == "lambda") return p.lambda;
  if (name == "eta4") return p.eta4;
  if (name == "d1") return p.d1;
  if (name == "d2") return p.d2;
  if (name == "d3") return p.d3;
  if (name == "d4") return p.d4;
  if (name == "c4") return p.c4;
  throw ConfigError("unknown two-qubit parameter '" + name + "'");
}

// Perturbed value k units from v. The decimal is rebuilt from the integer
// count of units so that e.g. 7.820 + 1 unit prints as 7.821.
inline double shifted_value(double v, int digits, int k) {
  if (k == 0) return v;
  const double step = last_place_step(v, digits);
  const double units = std::round(v / step) + k;
  const int e = static_cast<int>(std::floor(std::log10(step)));
  return e < 0 ? units / std::pow(10.0, -e) : units * std::pow(10.0, e);
}

struct SensitivityRow {
  std::string parameter;
  int shift = 0;  // -1, 0, +1 units in the last place
  double value = 0;
  double trace_p_with_noc = 0;
  double trace_p_without_noc = 0;
};

template <class Sys>
std::array<SensitivityRow, 3> run_sensitivity(const ImprovedGateResult<Sys::N>& base,
                                              const typename Sys::Params& p,
                                              const std::string& parameter, const TimeGrid& g,
                                              unsigned workers = worker_count()) {
  auto probe = p;
  const double v0 = param_ref(probe, parameter);
  const int digits = printed_digits(parameter);
  std::array<SensitivityRow, 3> rows;
  for (int i = 0; i < 3; ++i) rows[i] = {parameter, i - 1, shifted_value(v0, digits, i - 1), 0, 0};
  parallel_for(
      6,
      [&](std::size_t i) {
        auto& row = rows[i / 2];
        auto q = p;
        param_ref(q, parameter) = row.value;
        const bool with = i % 2 == 0;
        const double t =
            evaluate_gate<Sys>(q, g, with ? &base.control : nullptr, base.frame, base.target);
        (with ? row.trace_p_with_noc : row.trace_p_without_noc) = t;
      },
      workers);
  return rows;
}

}  // namespace nocgf
