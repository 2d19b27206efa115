#pragma once

// Fixed-step classical RK4 for iU' = H(τ)U and for the Strategy-2 state
// equation Δy' = -G G† Δy. No re-unitarization: the unitarity defect is
// reported, not enforced.

#include <cstdio>
#include <functional>
#include <vector>

#include "control.hpp"

namespace nocgf {

inline constexpr long kDefaultSteps1Q = 320000;
inline constexpr long kDefaultSteps2Q = 720000;
inline constexpr double kUnitarityBudget = 1e-10;

struct TimeGrid {
  double tau0 = 160;
  long steps = kDefaultSteps1Q;

  double start() const { return -tau0 / 2; }
  double end() const { return tau0 / 2; }
  double h() const { return tau0 / static_cast<double>(steps); }
  double tau(long k) const { return start() + static_cast<double>(k) * h(); }
  long points() const { return steps + 1; }
  bool operator==(const TimeGrid&) const = default;
};

inline void validate(const TimeGrid& g) {
  if (g.steps < 1 || !(g.tau0 > 0)) throw ContractViolation("TimeGrid: invalid");
}


struct ControlModification {
  TimeGrid grid;
  std::vector<ControlField3> samples;  // one per grid point

  ControlField3 at(long k, int stage) const {
    if (stage == 0) return samples[k];
    if (stage == 2) return samples[k + 1];
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    return {(a.x + b.x) / 2, (a.y + b.y) / 2, (a.z + b.z) / 2};
  }
};

using PhaseNoiseFn = std::function<double(double)>;

template <int N>
struct Trajectory {
  TimeGrid grid;
  std::vector<Mat<N>> unitaries;  // all grid points, or only the two ends
  bool complete = true;
  double max_defect = 0;

  const Mat<N>& final() const { return unitaries.back(); }
  const Mat<N>& at(long k) const { return unitaries.at(static_cast<std::size_t>(k)); }
};

// One RK4 step. hk, hm, hn are H at the start, midpoint and end of the step.
template <int N>
Mat<N> rk4_step(const Mat<N>& u, const Mat<N>& hk, const Mat<N>& hm, const Mat<N>& hn, double h) {
  const Mat<N> k1 = -I_ * (hk * u);
  const Mat<N> k2 = -I_ * (hm * (u + (h / 2) * k1));
  const Mat<N> k3 = -I_ * (hm * (u + (h / 2) * k2));
  const Mat<N> k4 = -I_ * (hn * (u + h * k3));
  return u + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Generic propagation. hfn(k, stage) returns H at τ_k (stage 0), at the
// midpoint (1) or at τ_{k+1} (2). Steps k0..k1-1 of the grid are taken.
// With continuous_h the end value of one step is reused as the start of the
// next; otherwise every stage is evaluated per step.
template <int N, class HFn>
Trajectory<N> rk4_propagate(HFn&& hfn, const TimeGrid& g, long k0, long k1, const Mat<N>& u0,
                            bool keep_all, bool continuous_h = true) {
  Trajectory<N> tr;
  tr.grid = g;
  tr.complete = keep_all;
  if (keep_all) tr.unitaries.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  Mat<N> u = u0;
  tr.unitaries.push_back(u);
  const double h = g.h();
  Mat<N> hk = hfn(k0, 0);
  double defect = unitarity_defect(u);
  for (long k = k0; k < k1; ++k) {
    if (!continuous_h && k != k0) hk = hfn(k, 0);
    const Mat<N> hm = hfn(k, 1);
    const Mat<N> hn = hfn(k, 2);
    u = rk4_step<N>(u, hk, hm, hn, h);
    hk = hn;
    defect = std::max(defect, unitarity_defect(u));
    if (keep_all) tr.unitaries.push_back(u);
  }
  if (!keep_all) tr.unitaries.push_back(u);
  tr.max_defect = defect;
  return tr;
}

template <int N>
void check_unitarity(const Trajectory<N>& tr) {
  if (tr.max_defect <= kUnitarityBudget) return;
  char buf[160];
  std::snprintf(buf, sizeof buf, "propagation: unitarity defect %.3e exceeds %.0e with %ld steps",
                tr.max_defect, kUnitarityBudget, tr.grid.steps);
  throw AccuracyError(buf);
}

inline double stage_tau(const TimeGrid& g, long k, int stage) {
  return g.tau(k) + 0.5 * stage * g.h();
}

template <class Sys>
Trajectory<Sys::N> propagate_modified(const typename Sys::Params& p, const TimeGrid& g,
                                      const ControlModification* df,
                                      const PhaseNoiseFn& noise = {}, bool keep_all = true) {
  constexpr int N = Sys::N;
  validate(g);
  if (df && (!(df->grid == g) || static_cast<long>(df->samples.size()) != g.points()))
    throw DimensionError("propagate_modified: control modification grid mismatch");
  // Phase noise is piecewise constant; it is held at its step-midpoint value
  // across each step so that no pulse edge falls inside an RK4 step.
  auto hfn = [&](long k, int stage) {
    const double tau = stage_tau(g, k, stage);
    Mat<N> h = Sys::hamiltonian(tau, p, noise ? noise(stage_tau(g, k, 1)) : 0.0);
    if (df) {
      const ControlField3 f = df->at(k, stage);
      const CouplingSet<N> c = Sys::couplings(tau, p);
      h += f.x * c[0] + f.y * c[1] + f.z * c[2];
    }
    return h;
  };
  auto tr = rk4_propagate<N>(hfn, g, 0, g.steps, Mat<N>::Identity(), keep_all, !noise);
  check_unitarity(tr);
  return tr;
}

template <class Sys>
Trajectory<Sys::N> propagate_nominal(const typename Sys::Params& p, const TimeGrid& g,
                                     const PhaseNoiseFn& noise = {}, bool keep_all = true) {
  return propagate_modified<Sys>(p, g, nullptr, noise, keep_all);
}

// Δy' = -G G† Δy with Δy(τ_start) = -Δb. gfn(k) returns G at grid point k;
// the midpoint value is the linear interpolation of its neighbours.
template <int N, class GFn>
std::vector<Vec<N * N>> integrate_delta_y(GFn&& gfn, const TimeGrid& g,
                                          const Vec<N * N>& delta_b) {
  using V = Vec<N * N>;
  using G = DriveMatrix<N>;
  validate(g);
  std::vector<V> out;
  out.reserve(static_cast<std::size_t>(g.points()));
  V y = -delta_b;
  out.push_back(y);
  const double h = g.h();
  G gk = gfn(0);
  auto rhs = [](const G& gm, const V& v) -> V { return -(gm * (gm.adjoint() * v)); };
  for (long k = 0; k < g.steps; ++k) {
    const G gn = gfn(k + 1);
    const G gm = 0.5 * (gk + gn);
    const V k1 = rhs(gk, y);
    const V k2 = rhs(gm, y + (h / 2) * k1);
    const V k3 = rhs(gm, y + (h / 2) * k2);
    const V k4 = rhs(gn, y + h * k3);
    y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(y);
    gk = gn;
  }
  return out;
}

}  // namespace nocgf
