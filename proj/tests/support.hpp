#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

#include "nocgf/lincore.hpp"

namespace testing {

using namespace nocgf;

template <int N>
Mat<N> random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Mat<N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = cplx(d(rng), d(rng));
  return m;
}

template <int N>
Mat<N> random_hermitian(std::mt19937_64& rng) {
  const Mat<N> m = random_matrix<N>(rng);
  return (m + m.adjoint()) / 2.0;
}

// Independent of expi_hermitian: Eigen's Padé matrix exponential.
template <int N>
Mat<N> random_unitary(std::mt19937_64& rng) {
  const Mat<N> h = random_hermitian<N>(rng);
  return (I_ * h).exp();
}

}  // namespace testing
