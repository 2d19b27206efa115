#pragma once

// Neighboring optimal control about a nominal TRP gate.
//
// Strategy 1 (one qubit) uses the decaying Lagrange-multiplier ansatz
// Δλ = -exp[-(τ+τ₀/2)/10] w with w = Δb/20, giving Δf = exp[..] G†w.
// Strategy 2 (two qubits) takes S = I, R = I, Q = G G†, so the Riccati
// equation holds identically and the feedback law is Δf = -G†Δy with
// Δy' = -G G†Δy, Δy(-τ₀/2) = -Δb.
//
// δβ is hermitized, so Δb lives in the vectorized Hermitian subspace. That
// subspace is invariant under G G† and maps to real fields under G†, which
// is why only real parts are kept. The cost integrals J₂, J₃ are satisfied
// by construction and never evaluated; J₁ is reported as Tr P.

#include <optional>

#include "metrics.hpp"
#include "propagate.hpp"

namespace nocgf {

inline constexpr double kAnsatzDecay = 10.0;
inline constexpr double kImagGuard = 1e-6;

template <int N>
Vec<N * N> lambda_ansatz(double tau, const Vec<N * N>& w, double tau0,
                         double decay = kAnsatzDecay) {
  return -std::exp(-(tau + tau0 / 2) / decay) * w;
}

// The ansatz weight integrates to decay·(1 - e^{-τ₀/decay}); the tail is
// dropped, and the contraction identity contributes the factor 2.
inline Vec<4> strategy1_weights(const TargetOffset<2>& off, double decay = kAnsatzDecay) {
  return off.delta_b / (2 * decay);
}

inline Vec<16> strategy1_weights(const TargetOffset<4>&, double = kAnsatzDecay) {
  throw UnsupportedSystem("strategy1_weights: two-qubit offsets use strategy 2");
}

struct ControlResult {
  ControlModification control;
  double max_imag = 0;  // largest discarded imaginary part
};

template <int N>
ControlField3 real_field(const Eigen::Matrix<cplx, 3, 1>& v, double& max_imag) {
  max_imag = std::max({max_imag, std::abs(v[0].imag()), std::abs(v[1].imag()),
                       std::abs(v[2].imag())});
  return {v[0].real(), v[1].real(), v[2].real()};
}

inline void guard_imag(double max_imag) {
  if (max_imag > kImagGuard)
    throw ConsistencyError("control modification has imaginary residue " +
                           std::to_string(max_imag));
}

template <int N, class GFn>
ControlResult strategy1_control(GFn&& gfn, const Vec<N * N>& w, const TimeGrid& g,
                                double decay = kAnsatzDecay) {
  ControlResult r;
  r.control.grid = g;
  r.control.samples.reserve(static_cast<std::size_t>(g.points()));
  for (long k = 0; k < g.points(); ++k) {
    const double a = std::exp(-(g.tau(k) - g.start()) / decay);
    const Eigen::Matrix<cplx, 3, 1> v = a * (gfn(k).adjoint() * w);
    r.control.samples.push_back(real_field<N>(v, r.max_imag));
  }
  guard_imag(r.max_imag);
  return r;
}

// Σ_j Ḡ_j (G†w)_j for one qubit.
inline Mat<2> contracted_drive(const CouplingSet<2>& gbar, const DriveMatrix<2>& g,
                               const Vec<4>& w) {
  const Eigen::Matrix<cplx, 3, 1> c = g.adjoint() * w;
  return gbar[0] * c[0] + gbar[1] * c[1] + gbar[2] * c[2];
}

// 2W - Tr(W) I written out in the column-stacked components of w.
inline Mat<2> contracted_drive_closed_form(const Vec<4>& w) {
  Mat<2> m;
  m << w[0] - w[3], 2.0 * w[2], 2.0 * w[1], w[3] - w[0];
  return m;
}

template <int N>
struct Strategy2Solution {
  std::vector<Vec<N * N>> delta_y;
  ControlModification control;
  double max_imag = 0;
  double max_riccati_residual = 0;
};

template <int N>
double riccati_residual(const DriveMatrix<N>& g) {
  using S = Eigen::Matrix<cplx, N * N, N * N>;
  const S s = S::Identity();
  const Eigen::Matrix<cplx, 3, 3> rinv = Eigen::Matrix<cplx, 3, 3>::Identity();
  const S q = g * g.adjoint();
  return max_norm(S(-q + s * g * rinv * g.adjoint() * s));
}

template <int N, class GFn>
Strategy2Solution<N> strategy2_solve(GFn&& gfn, const Vec<N * N>& delta_b, const TimeGrid& g) {
  Strategy2Solution<N> sol;
  sol.delta_y = integrate_delta_y<N>(gfn, g, delta_b);
  sol.control.grid = g;
  sol.control.samples.reserve(sol.delta_y.size());
  for (long k = 0; k < g.points(); ++k) {
    const DriveMatrix<N> gk = gfn(k);
    sol.max_riccati_residual = std::max(sol.max_riccati_residual, riccati_residual<N>(gk));
    const Eigen::Matrix<cplx, 3, 1> v = -(gk.adjoint() * sol.delta_y[static_cast<std::size_t>(k)]);
    sol.control.samples.push_back(real_field<N>(v, sol.max_imag));
  }
  guard_imag(sol.max_imag);
  return sol;
}

template <int N>
struct ImprovedGateResult {
  Mat<N> target;
  GateFrame<N> frame;
  Mat<N> nominal_unitary;   // gate frame
  Mat<N> improved_unitary;  // gate frame
  ErrorReport nominal_report;
  ErrorReport improved_report;
  TargetOffset<N> offset;   // gate frame
  ControlModification control;
  double max_imag = 0;
  double max_riccati_residual = 0;   // strategy 2 only
  std::vector<double> delta_y_norm;  // strategy 2 only, per grid point
  Vec<N * N> weights = Vec<N * N>::Zero();  // strategy 1 only
  double nominal_defect = 0;
  double improved_defect = 0;
};

inline int default_strategy(int qubits) { return qubits == 1 ? 1 : 2; }

template <class Sys>
ImprovedGateResult<Sys::N> improve_gate(const Mat<Sys::N>& target,
                                        const typename Sys::Params& p, const TimeGrid& g,
                                        int strategy = default_strategy(Sys::qubits),
                                        double decay = kAnsatzDecay) {
  constexpr int N = Sys::N;
  if (strategy != default_strategy(Sys::qubits))
    throw ConfigError("improve_gate: strategy " + std::to_string(strategy) +
                      " does not apply to a " + std::to_string(Sys::qubits) + "-qubit gate");
  ImprovedGateResult<N> r;
  r.target = target;
  r.frame = gate_frame<Sys>(p);
  Vec<N * N> db_lab;
  {
    const auto tr = propagate_nominal<Sys>(p, g);
    r.nominal_defect = tr.max_defect;
    r.nominal_unitary = r.frame.to_gate(tr.final());
    r.nominal_report = error_report<N>(r.nominal_unitary, target);
    r.offset = target_offset<N>(r.nominal_unitary, target);
    db_lab = vectorize<N>(r.frame.offset_to_lab(r.offset.delta_beta));
    auto gfn = [&](long k) { return drive_matrix<N>(tr.at(k), Sys::couplings(g.tau(k), p)); };
    if constexpr (N == 2) {
      r.weights = db_lab / (2 * decay);
      auto c = strategy1_control<N>(gfn, r.weights, g, decay);
      r.control = std::move(c.control);
      r.max_imag = c.max_imag;
    } else {
      auto s = strategy2_solve<N>(gfn, db_lab, g);
      r.control = std::move(s.control);
      r.max_imag = s.max_imag;
      r.max_riccati_residual = s.max_riccati_residual;
      r.delta_y_norm.reserve(s.delta_y.size());
      for (const auto& y : s.delta_y) r.delta_y_norm.push_back(y.norm());
    }
  }
  const auto mod = propagate_modified<Sys>(p, g, &r.control, {}, false);
  r.improved_defect = mod.max_defect;
  r.improved_unitary = r.frame.to_gate(mod.final());
  r.improved_report = error_report<N>(r.improved_unitary, target);
  return r;
}

template <class Sys>
ImprovedGateResult<Sys::N> improve_gate(Gate gate, const typename Sys::Params& p,
                                        const TimeGrid& g,
                                        int strategy = default_strategy(Sys::qubits),
                                        double decay = kAnsatzDecay) {
  return improve_gate<Sys>(gate_target<Sys::N>(gate), p, g, strategy, decay);
}

// Tr P of the gate produced by params p with a frozen control modification,
// read in the given frame.
template <class Sys>
double evaluate_gate(const typename Sys::Params& p, const TimeGrid& g,
                     const ControlModification* df, const GateFrame<Sys::N>& frame,
                     const Mat<Sys::N>& target, const PhaseNoiseFn& noise = {}) {
  const auto tr = propagate_modified<Sys>(p, g, df, noise, false);
  return trace_p<Sys::N>(frame.to_gate(tr.final()), target);
}

}  // namespace nocgf
