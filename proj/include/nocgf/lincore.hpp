#pragma once

// Dense complex helpers for N = 2 and N = 4. Vectorization stacks columns,
// which is exactly Eigen's column-major storage order.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace nocgf {

using cplx = std::complex<double>;
inline constexpr cplx I_{0.0, 1.0};

template <int N> using Mat = Eigen::Matrix<cplx, N, N>;
template <int N> using Vec = Eigen::Matrix<cplx, N, 1>;
template <int N> using RVec = Eigen::Matrix<double, N, 1>;

inline Mat<2> sigma_x() { Mat<2> m; m << 0, 1, 1, 0; return m; }
inline Mat<2> sigma_y() { Mat<2> m; m << 0, -I_, I_, 0; return m; }
inline Mat<2> sigma_z() { Mat<2> m; m << 1, 0, 0, -1; return m; }

// A ⊗ B with qubit 1 as the most significant index.
template <int A, int B>
Mat<A * B> kron(const Mat<A>& a, const Mat<B>& b) {
  Mat<A * B> out;
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) out.template block<B, B>(i * B, j * B) = a(i, j) * b;
  return out;
}

template <int N>
Vec<N * N> vectorize(const Mat<N>& m) {
  return Eigen::Map<const Vec<N * N>>(m.data());
}

template <int N>
Mat<N> devectorize(const Eigen::Ref<const Eigen::VectorXcd>& v) {
  if (v.size() != N * N)
    throw DimensionError("devectorize: length " + std::to_string(v.size()) + " is not " +
                         std::to_string(N * N));
  return Eigen::Map<const Mat<N>>(v.data());
}

inline Eigen::MatrixXcd devectorize(const Eigen::Ref<const Eigen::VectorXcd>& v, int dim) {
  if (dim < 1 || v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw DimensionError("devectorize: length " + std::to_string(v.size()) +
                         " does not match dim " + std::to_string(dim));
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

template <class Derived>
double max_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class Derived>
auto hermitize(const Eigen::MatrixBase<Derived>& m) {
  using M = typename Derived::PlainObject;
  M out = 0.5 * (m + m.adjoint());
  return out;
}

template <class Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_norm(m - m.adjoint());
}

template <class Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using M = typename Derived::PlainObject;
  return max_norm(u.adjoint() * u - M::Identity(u.rows(), u.cols()));
}

// Rotate the phase of v so that v[idx] is real and non-negative.
template <class V>
void fix_phase(V& v, Eigen::Index idx) {
  const double a = std::abs(v[idx]);
  if (a > 0) v *= std::conj(v[idx]) / a;
}

template <int N>
struct Eigensystem {
  RVec<N> values;   // ascending
  Mat<N> vectors;   // columns, largest component real and positive
};

inline constexpr double kHermitianTol = 1e-12;

template <int N>
Eigensystem<N> hermitian_eigensystem(const Mat<N>& m) {
  const double scale = std::max(1.0, max_norm(m));
  if (hermiticity_defect(m) > kHermitianTol * scale)
    throw ContractViolation("hermitian_eigensystem: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(m);
  Eigensystem<N> out{es.eigenvalues(), es.eigenvectors()};
  for (int k = 0; k < N; ++k) {
    auto col = out.vectors.col(k);
    Eigen::Index idx;
    col.cwiseAbs().maxCoeff(&idx);
    fix_phase(col, idx);
  }
  return out;
}

// exp(i H) for Hermitian H, via the eigensystem.
template <int N>
Mat<N> expi_hermitian(const Mat<N>& h) {
  auto es = hermitian_eigensystem<N>(h);
  Vec<N> ph;
  for (int k = 0; k < N; ++k) ph[k] = std::exp(I_ * es.values[k]);
  return es.vectors * ph.asDiagonal() * es.vectors.adjoint();
}

}  // namespace nocgf
