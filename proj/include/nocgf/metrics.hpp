#pragma once

// Gate targets, the Tr P error bound and related figures of merit, and the
// endpoint eigenbasis in which a propagator is read as a gate.

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

#include "control.hpp"

namespace nocgf {

enum class Gate { Not, Hadamard, Pi8, Phase, CPhase };

inline constexpr Gate kAllGates[] = {Gate::Not, Gate::Hadamard, Gate::Pi8, Gate::Phase,
                                     Gate::CPhase};

inline std::string gate_name(Gate g) {
  switch (g) {
    case Gate::Not: return "not";
    case Gate::Hadamard: return "hadamard";
    case Gate::Pi8: return "pi8";
    case Gate::Phase: return "phase";
    case Gate::CPhase: return "cphase";
  }
  return "?";
}

inline Gate parse_gate(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Gate g : kAllGates)
    if (gate_name(g) == s) return g;
  throw ConfigError("unknown gate '" + s + "' (expected not, hadamard, pi8, phase, cphase)");
}

inline int gate_qubits(Gate g) { return g == Gate::CPhase ? 2 : 1; }

inline Mat<2> target_1q(Gate g) {
  const double r = 1.0 / std::sqrt(2.0);
  const double c8 = std::cos(std::numbers::pi / 8), s8 = std::sin(std::numbers::pi / 8);
  switch (g) {
    case Gate::Not: return sigma_x();
    case Gate::Hadamard: return r * (sigma_z() + sigma_x());
    case Gate::Pi8: return c8 * sigma_x() - s8 * sigma_y();
    case Gate::Phase: return r * (sigma_x() - sigma_y());
    case Gate::CPhase: break;
  }
  throw UnsupportedSystem("target_1q: " + gate_name(g) + " is a two-qubit gate");
}

// (1/2)[(I+σz)⊗I - (I-σz)⊗σz] = diag(1, 1, -1, 1)
inline Mat<4> target_2q() {
  const Mat<2> id = Mat<2>::Identity();
  return 0.5 * (kron<2, 2>(id + sigma_z(), id) - kron<2, 2>(id - sigma_z(), sigma_z()));
}

template <int N>
Mat<N> gate_target(Gate g) {
  if constexpr (N == 2) return target_1q(g);
  else {
    if (g != Gate::CPhase) throw UnsupportedSystem("gate_target: " + gate_name(g) + " is 1Q");
    return target_2q();
  }
}

template <int N>
double trace_p(const Mat<N>& ua, const Mat<N>& ut) {
  const Mat<N> d = ua - ut;
  return (d.adjoint() * d).trace().real();
}

template <int N>
double d_star(const Mat<N>& ua, const Mat<N>& ut) {
  const Mat<N> d = ua - ut;
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(hermitize(Mat<N>(d.adjoint() * d)),
                                           Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()[N - 1]);
}

inline double fidelity(double trp, int qubits) {
  if (trp < 0 || qubits < 1) throw ContractViolation("fidelity: invalid arguments");
  return 1.0 - trp / std::ldexp(1.0, qubits + 1);
}

struct ErrorReport {
  double trace_p = 0;
  double d_star = 0;
  double fidelity = 1;
  int qubits = 1;
};

template <int N>
ErrorReport error_report(const Mat<N>& ua, const Mat<N>& ut) {
  constexpr int n = N == 2 ? 1 : 2;
  const double t = trace_p<N>(ua, ut);
  return {t, d_star<N>(ua, ut), fidelity(t, n), n};
}

template <int N>
struct TargetOffset {
  Mat<N> delta_beta;
  Vec<N * N> delta_b;
};

template <int N>
TargetOffset<N> target_offset(const Mat<N>& u0_final, const Mat<N>& target) {
  if (unitarity_defect(u0_final) > 1e-8)
    throw ContractViolation("target_offset: final propagator not unitary");
  const Mat<N> db = hermitize(Mat<N>(I_ * (u0_final.adjoint() * target - Mat<N>::Identity())));
  return {db, vectorize<N>(db)};
}

// Endpoint eigenbasis of the noise-free Hamiltonian. Column c is the
// eigenvector closest to computational state |c>, with its first component
// made real and non-negative (the usual spinor gauge).
template <int N>
struct GateFrame {
  Mat<N> initial;
  Mat<N> final;

  Mat<N> to_gate(const Mat<N>& u) const { return final.adjoint() * u * initial; }
  Mat<N> to_lab(const Mat<N>& t) const { return final * t * initial.adjoint(); }
  Mat<N> offset_to_lab(const Mat<N>& db) const { return initial * db * initial.adjoint(); }
};

template <int N>
Mat<N> labelled_eigenbasis(const Mat<N>& h) {
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(h);
  const Mat<N>& v = es.eigenvectors();
  std::array<int, N> perm, best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_score = -1;
  do {
    double s = 1;
    for (int c = 0; c < N; ++c) s *= std::abs(v(c, perm[c]));
    if (s > best_score) { best_score = s; best = perm; }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Mat<N> out;
  for (int c = 0; c < N; ++c) {
    Vec<N> col = v.col(best[c]);
    if (std::abs(col[0]) > 1e-12) fix_phase(col, 0);
    else fix_phase(col, c);
    out.col(c) = col;
  }
  return out;
}

template <class Sys>
GateFrame<Sys::N> gate_frame(const typename Sys::Params& p) {
  return {labelled_eigenbasis<Sys::N>(Sys::hamiltonian(-p.tau0 / 2, p)),
          labelled_eigenbasis<Sys::N>(Sys::hamiltonian(p.tau0 / 2, p))};
}

}  // namespace nocgf
