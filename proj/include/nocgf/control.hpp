#pragma once

// Twisted-rapid-passage control fields and the dimensionless one- and
// two-qubit Hamiltonians. Phase noise enters only through the twist phase.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "lincore.hpp"

namespace nocgf {

struct SweepParams1Q {
  double lambda = 0;
  double eta4 = 0;
  double tau0 = 160;
};

struct SweepParams2Q {
  double lambda = 0;
  double eta4 = 0;
  double tau0 = 120;
  double d1 = 0, d2 = 0, d3 = 0, d4 = 0;
  double c4 = 0;
};

inline void validate(const SweepParams1Q& p) {
  if (!(p.lambda > 0 && p.eta4 > 0 && p.tau0 > 0 && std::isfinite(p.tau0)))
    throw ContractViolation("SweepParams1Q: lambda, eta4, tau0 must be positive");
}

inline void validate(const SweepParams2Q& p) {
  if (!(p.lambda > 0 && p.eta4 > 0 && p.tau0 > 0 && std::isfinite(p.tau0)))
    throw ContractViolation("SweepParams2Q: lambda, eta4, tau0 must be positive");
  for (double d : {p.d1, p.d2, p.d3, p.d4, p.c4})
    if (!std::isfinite(d)) throw ContractViolation("SweepParams2Q: non-finite coupling");
}

struct ControlField3 {
  double x = 0, y = 0, z = 0;
  double operator[](int j) const { return j == 0 ? x : (j == 1 ? y : z); }
  double& operator[](int j) { return j == 0 ? x : (j == 1 ? y : z); }
};

template <int N>
using CouplingSet = std::array<Mat<N>, 3>;

template <class P>
double twist_phase(double tau, const P& p, double dphi = 0.0) {
  const double t2 = tau * tau;
  return p.eta4 / (2.0 * p.lambda) * t2 * t2 + dphi;
}

// The transverse field rotates clockwise about z (y component -sin φ), which
// places the three resonances at τ = 0, ±1/√η₄ for H = -σ·f.
inline ControlField3 one_qubit_field(double tau, const SweepParams1Q& p, double dphi = 0.0) {
  const double ph = twist_phase(tau, p, dphi);
  return {std::cos(ph) / p.lambda, -std::sin(ph) / p.lambda, tau / p.lambda};
}

inline Mat<2> one_qubit_hamiltonian(const ControlField3& f) {
  Mat<2> h;
  h << -f.z, -cplx(f.x, -f.y), -cplx(f.x, f.y), f.z;
  return h;
}

namespace detail {
struct TwoQubitOps {
  Mat<4> x1, y1, z1, x2, y2, z2, zz;
  TwoQubitOps() {
    const Mat<2> id = Mat<2>::Identity();
    x1 = kron<2, 2>(sigma_x(), id);
    y1 = kron<2, 2>(sigma_y(), id);
    z1 = kron<2, 2>(sigma_z(), id);
    x2 = kron<2, 2>(id, sigma_x());
    y2 = kron<2, 2>(id, sigma_y());
    z2 = kron<2, 2>(id, sigma_z());
    zz = z1 * z2;
  }
};
inline const TwoQubitOps& ops2() {
  static const TwoQubitOps o;
  return o;
}
}  // namespace detail

// Ising-coupled pair without the degeneracy-breaking projector.
inline Mat<4> two_qubit_base_hamiltonian(double tau, const SweepParams2Q& p, double dphi = 0.0) {
  const auto& o = detail::ops2();
  const double ph = twist_phase(tau, p, dphi);
  const double c = std::cos(ph), s = std::sin(ph);
  return (-(p.d1 + p.d2) / 2 + tau / p.lambda) * o.z1 + (-p.d2 / 2 + tau / p.lambda) * o.z2 -
         (p.d3 / p.lambda) * (c * o.x1 + s * o.y1) - (1.0 / p.lambda) * (c * o.x2 + s * o.y2) -
         (std::numbers::pi * p.d4 / 2) * o.zz;
}

inline constexpr double kDegeneracyGap = 1e-10;

inline Mat<4> two_qubit_hamiltonian(double tau, const SweepParams2Q& p, double dphi = 0.0) {
  Mat<4> h = two_qubit_base_hamiltonian(tau, p, dphi);
  if (p.c4 == 0.0) return h;
  Eigen::SelfAdjointEigenSolver<Mat<4>> es(h);
  if (es.eigenvalues()[3] - es.eigenvalues()[2] < kDegeneracyGap)
    throw DegeneracyError("two_qubit_hamiltonian: top eigenvalues degenerate at tau=" +
                          std::to_string(tau));
  const Vec<4> e4 = es.eigenvectors().col(3);
  h += p.c4 * (e4 * e4.adjoint());
  return h;
}

inline CouplingSet<2> one_qubit_couplings() { return {-sigma_x(), -sigma_y(), -sigma_z()}; }

// Rotation rates of the two-qubit couplings: β = d₁/(d₃-1), α = β + d₁.
inline std::pair<double, double> coupling_rates(const SweepParams2Q& p) {
  if (p.d3 == 1.0) throw ContractViolation("coupling_rates: d3 = 1 makes the rates singular");
  const double beta = p.d1 / (p.d3 - 1.0);
  return {beta + p.d1, beta};
}

inline CouplingSet<4> two_qubit_couplings(double tau, const SweepParams2Q& p) {
  const auto& o = detail::ops2();
  const auto [alpha, beta] = coupling_rates(p);
  const double ca = std::cos(alpha * tau), sa = std::sin(alpha * tau);
  const double cb = std::cos(beta * tau), sb = std::sin(beta * tau);
  return {
      p.d3 * (ca * o.x1 + sa * o.y1) + (cb * o.x2 + sb * o.y2),
      p.d3 * (ca * o.y1 - sa * o.x1) + (cb * o.y2 - sb * o.x2),
      p.d3 * o.z1 + o.z2,
  };
}

template <int N>
using DriveMatrix = Eigen::Matrix<cplx, N * N, 3>;

template <int N>
DriveMatrix<N> drive_matrix(const Mat<N>& u0, const CouplingSet<N>& g) {
  if (unitarity_defect(u0) > 1e-8) throw ContractViolation("drive_matrix: U0 is not unitary");
  DriveMatrix<N> out;
  for (int j = 0; j < 3; ++j) out.col(j) = vectorize<N>(u0.adjoint() * g[j] * u0);
  return out;
}

struct ResonanceTime {
  double tau;
  bool inside;  // within [-τ₀/2, τ₀/2]
};

inline std::vector<ResonanceTime> resonance_times(const SweepParams1Q& p) {
  if (!(p.eta4 > 0)) throw ContractViolation("resonance_times: eta4 must be positive");
  const double r = 1.0 / std::sqrt(p.eta4);
  std::vector<ResonanceTime> out;
  for (double t : {-r, 0.0, r}) out.push_back({t, std::abs(t) <= p.tau0 / 2});
  return out;
}

// Static description of each system, used to instantiate the generic code.
struct OneQubit {
  static constexpr int N = 2;
  static constexpr int qubits = 1;
  using Params = SweepParams1Q;
  static Mat<2> hamiltonian(double tau, const Params& p, double dphi = 0.0) {
    return one_qubit_hamiltonian(one_qubit_field(tau, p, dphi));
  }
  static CouplingSet<2> couplings(double, const Params&) { return one_qubit_couplings(); }
};

struct TwoQubit {
  static constexpr int N = 4;
  static constexpr int qubits = 2;
  using Params = SweepParams2Q;
  static Mat<4> hamiltonian(double tau, const Params& p, double dphi = 0.0) {
    return two_qubit_hamiltonian(tau, p, dphi);
  }
  static CouplingSet<4> couplings(double tau, const Params& p) {
    return two_qubit_couplings(tau, p);
  }
};

}  // namespace nocgf
