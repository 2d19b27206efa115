#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nocgf/control.hpp"
#include "support.hpp"

using namespace nocgf;
using namespace testing;

namespace {
const SweepParams1Q kHad{7.820, 1.792e-4, 160};
const SweepParams1Q kNot{6.965, 2.189e-4, 160};
const SweepParams2Q kCp{5.1, 2.4e-4, 120, 11.702, -2.6, -0.41, 6.6650, 5.0003};
}  // namespace

TEST_CASE("twist phase") {
  CHECK(twist_phase(0.0, kHad) == 0.0);
  CHECK(twist_phase(80.0, kHad) == doctest::Approx(1.792e-4 / 15.64 * std::pow(80.0, 4)).epsilon(1e-14));
  CHECK(twist_phase(80.0, kHad) == doctest::Approx(469.33).epsilon(1e-4));
  CHECK(twist_phase(1.0, kHad, 0.5) == doctest::Approx(0.5 + 1.792e-4 / 15.64));
}

TEST_CASE("one-qubit field") {
  const auto f = one_qubit_field(0.0, kHad);
  CHECK(f.x == doctest::Approx(1 / 7.820));
  CHECK(f.y == 0.0);
  CHECK(f.z == 0.0);
  const auto g = one_qubit_field(0.0, kHad, std::numbers::pi);
  CHECK(g.x == doctest::Approx(-1 / 7.820));
  CHECK(std::abs(g.y) < 1e-16);
  const auto t = one_qubit_field(40.0, kHad);
  CHECK(std::hypot(t.x, t.y) == doctest::Approx(1 / 7.820));
  CHECK(t.z == doctest::Approx(40 / 7.820));
}

TEST_CASE("one-qubit hamiltonian is -sigma.f") {
  CHECK(max_norm(one_qubit_hamiltonian({0, 0, 1}) + sigma_z()) == 0.0);
  CHECK(max_norm(one_qubit_hamiltonian({1 / 7.820, 0, 0}) + sigma_x() / 7.820) < 1e-16);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (int t = 0; t < 100; ++t) {
    const ControlField3 f{d(rng), d(rng), d(rng)};
    const Mat<2> h = one_qubit_hamiltonian(f);
    CHECK(max_norm(h + f.x * sigma_x() + f.y * sigma_y() + f.z * sigma_z()) < 1e-15);
    const double n = std::sqrt(f.x * f.x + f.y * f.y + f.z * f.z);
    const auto ev = Eigen::ComplexEigenSolver<Mat<2>>(h).eigenvalues();
    const double a = std::min(ev(0).real(), ev(1).real()), b = std::max(ev(0).real(), ev(1).real());
    CHECK(a == doctest::Approx(-n).epsilon(1e-12));
    CHECK(b == doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("two-qubit hamiltonian") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-60, 60);
  for (int t = 0; t < 100; ++t) {
    const double tau = u(rng);
    const Mat<4> h = two_qubit_hamiltonian(tau, kCp);
    CHECK(hermiticity_defect(h) < 1e-12);

    // Assemble the same operator from plain Kronecker products and compare
    // spectra with a general (non-Hermitian) solver.
    const Mat<2> id = Mat<2>::Identity();
    const Mat<4> x1 = kron<2, 2>(sigma_x(), id), y1 = kron<2, 2>(sigma_y(), id);
    const Mat<4> z1 = kron<2, 2>(sigma_z(), id), x2 = kron<2, 2>(id, sigma_x());
    const Mat<4> y2 = kron<2, 2>(id, sigma_y()), z2 = kron<2, 2>(id, sigma_z());
    const double ph = kCp.eta4 / (2 * kCp.lambda) * std::pow(tau, 4);
    const double lam = kCp.lambda;
    Mat<4> ht = (-(kCp.d1 + kCp.d2) / 2 + tau / lam) * z1 + (-kCp.d2 / 2 + tau / lam) * z2 -
                (kCp.d3 / lam) * (std::cos(ph) * x1 + std::sin(ph) * y1) -
                (1 / lam) * (std::cos(ph) * x2 + std::sin(ph) * y2) -
                (std::numbers::pi * kCp.d4 / 2) * Mat<4>(z1 * z2);
    CHECK(max_norm(ht - two_qubit_base_hamiltonian(tau, kCp)) < 1e-12);
    Eigen::ComplexEigenSolver<Mat<4>> ces(ht);
    Eigen::Index top;
    ces.eigenvalues().real().maxCoeff(&top);
    const Vec<4> e4 = ces.eigenvectors().col(top).normalized();
    const Mat<4> full = ht + kCp.c4 * e4 * e4.adjoint();
    std::vector<double> a(4), b(4);
    const auto ea = Eigen::ComplexEigenSolver<Mat<4>>(full).eigenvalues();
    const auto eb = hermitian_eigensystem<4>(h).values;
    for (int k = 0; k < 4; ++k) a[k] = ea(k).real(), b[k] = eb(k);
    std::sort(a.begin(), a.end());
    for (int k = 0; k < 4; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
  }
}

TEST_CASE("couplings") {
  const auto g1 = one_qubit_couplings();
  CHECK(max_norm(g1[0] + sigma_x()) == 0.0);
  CHECK(max_norm(g1[1] + sigma_y()) == 0.0);
  CHECK(max_norm(g1[2] + sigma_z()) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-60, 60);
  for (int t = 0; t < 50; ++t) {
    const auto g = two_qubit_couplings(u(rng), kCp);
    for (int j = 0; j < 2; ++j) {
      CHECK(hermiticity_defect(g[j]) < 1e-15);
      CHECK(g[j].diagonal().norm() < 1e-15);
    }
    CHECK(hermiticity_defect(g[2]) < 1e-15);
  }
  auto bad = kCp;
  bad.d3 = 1.0;
  CHECK_THROWS_AS(two_qubit_couplings(0.0, bad), ContractViolation);
}

TEST_CASE("drive matrix") {
  const auto g = one_qubit_couplings();
  const auto d = drive_matrix<2>(Mat<2>::Identity(), g);
  for (int j = 0; j < 3; ++j) CHECK((d.col(j) - vectorize<2>(g[j])).norm() == 0.0);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const Mat<4> u = random_unitary<4>(rng);
    const auto g2 = two_qubit_couplings(3.0 * t - 60, kCp);
    const auto dm = drive_matrix<4>(u, g2);
    for (int j = 0; j < 3; ++j) {
      CHECK(hermiticity_defect(devectorize<4>(dm.col(j))) < 1e-12);
      CHECK(dm.col(j).norm() == doctest::Approx(g2[j].norm()).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(drive_matrix<2>(Mat<2>(2.0 * Mat<2>::Identity()), g), ContractViolation);
}

TEST_CASE("resonance times") {
  const auto r1 = resonance_times({1.0, 1.0, 160});
  CHECK(r1[0].tau == -1.0);
  CHECK(r1[1].tau == 0.0);
  CHECK(r1[2].tau == 1.0);

  // Root of dφ/dτ = 2 f_z, the rotating-frame detuning, found by bisection
  // on a finite-difference derivative of the twist phase.
  auto root = [](const SweepParams1Q& p) {
    auto detuning = [&](double t) {
      const double e = 1e-4;
      return (twist_phase(t + e, p) - twist_phase(t - e, p)) / (2 * e) - 2 * t / p.lambda;
    };
    double a = 10, b = 150;
    for (int i = 0; i < 200; ++i) {
      const double m = (a + b) / 2;
      (detuning(a) * detuning(m) <= 0 ? b : a) = m;
    }
    return (a + b) / 2;
  };
  for (const auto& p : {kHad, kNot}) {
    const auto r = resonance_times(p);
    CHECK(r[2].tau == doctest::Approx(root(p)).epsilon(1e-8));
    CHECK(r[0].tau == -r[2].tau);
    CHECK(r[2].inside);
  }
  CHECK(resonance_times(kHad)[2].tau == doctest::Approx(74.7).epsilon(1e-3));
  CHECK(resonance_times(kNot)[2].tau == doctest::Approx(67.6).epsilon(1e-3));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(SweepParams1Q{0.0, 1e-4, 160}), ContractViolation);
  CHECK_NOTHROW(validate(kHad));
  CHECK_NOTHROW(validate(kCp));
}
