#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nocgf/noise.hpp"

using namespace nocgf;

TEST_CASE("rate and expected count") {
  const NoiseParams p{0.001, 0.1, 0.3, 1};
  CHECK(p.rate() == doctest::Approx(0.16667).epsilon(1e-4));
  CHECK(p.rate() * 160 == doctest::Approx(27).epsilon(0.02));
  CHECK_THROWS_AS(validate(NoiseParams{-1, 0.1, 0.3, 1}), ContractViolation);
}

TEST_CASE("zero power gives no noise") {
  const auto r = sample_realization({0, 0.1, 0.3, 5}, 160);
  CHECK(r.count() == 0);
  for (double t : {-80.0, 0.0, 13.3}) CHECK(r(t) == 0.0);
  CHECK(r.mean_power() == 0.0);
}

TEST_CASE("pulse evaluation") {
  NoiseRealization r;
  r.tau0 = 160;
  r.tau_f = 0.3;
  r.centers = {0.0, 0.2, 50.0};
  r.amplitudes = {0.5, -0.25, 1.0};
  r.build();
  r.apply_scale(2.0);
  CHECK(r(-10.0) == 0.0);
  CHECK(r(-0.2) == doctest::Approx(1.0));
  CHECK(r(0.1) == doctest::Approx(2 * (0.5 - 0.25)));
  CHECK(r(0.4) == doctest::Approx(-0.5));
  CHECK(r(50.0) == doctest::Approx(2.0));
  CHECK(r.direct(50.0) == doctest::Approx(2.0));
}

TEST_CASE("segment table agrees with the sign-function sum") {
  const auto r = sample_realization({0.001, 0.1, 0.3, 42}, 160, 3);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-80, 80);
  for (int i = 0; i < 2000; ++i) {
    const double t = u(rng);
    CHECK(r(t) == doctest::Approx(r.direct(t)).epsilon(1e-12));
  }
}

TEST_CASE("power normalization") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto r = sample_realization({0.001, 0.1, 0.3, 7}, 160, k);
    CHECK(std::abs(r.mean_power() - 0.001) < 1e-12 * 0.001 + 1e-15);
  }
}

TEST_CASE("determinism") {
  const NoiseParams p{0.001, 0.1, 0.3, 123};
  const auto a = sample_realization(p, 160, 4);
  const auto b = sample_realization(p, 160, 4);
  const auto c = sample_realization(p, 160, 5);
  CHECK(a.centers == b.centers);
  CHECK(a.amplitudes == b.amplitudes);
  CHECK(a.scale == b.scale);
  CHECK(a.centers != c.centers);
}

TEST_CASE("moments over ten thousand draws") {
  const NoiseParams p{0.001, 0.1, 0.3, 2024};
  const int m = 10000;
  double cs = 0, cs2 = 0;
  double as = 0, as2 = 0, xs = 0;
  long na = 0;
  for (int k = 0; k < m; ++k) {
    const auto r = sample_realization(p, 160, static_cast<std::uint64_t>(k));
    const double n = static_cast<double>(r.count());
    cs += n;
    cs2 += n * n;
    for (std::size_t i = 0; i < r.centers.size(); ++i) {
      as += r.amplitudes[i];
      as2 += r.amplitudes[i] * r.amplitudes[i];
      xs += r.centers[i];
      ++na;
    }
  }
  const double lam = p.rate() * 160;
  const double mean = cs / m, var = cs2 / m - mean * mean;
  CHECK(std::abs(mean - lam) < 3 * std::sqrt(lam / m));
  // Var of the sample variance of a Poisson variable ≈ (λ + 2λ²)/m.
  CHECK(std::abs(var - lam) < 3 * std::sqrt((lam + 2 * lam * lam) / m));
  const double nd = static_cast<double>(na);
  CHECK(std::abs(as / nd) < 3 * 0.1 / std::sqrt(nd));
  CHECK(std::abs(as2 / nd - 0.01) < 3 * 0.01 * std::sqrt(2 / nd));
  CHECK(std::abs(xs / nd) < 3 * (160 / std::sqrt(12.0)) / std::sqrt(nd));
}

TEST_CASE("jitter conversion") {
  auto ps = [](double p) { return jitter_report(p, 1e9).sigma_t * 1e12; };
  auto sig3 = [](double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return std::string(b);
  };
  CHECK(sig3(ps(0.008)) == "14.2");
  CHECK(sig3(ps(0.005)) == "11.3");
  CHECK(sig3(ps(0.001)) == "5.03");
  CHECK(sig3(ps(6.25e-5)) == "1.26");
  CHECK(ps(0) == 0.0);
  CHECK_THROWS_AS(jitter_report(1e-3, 0), ContractViolation);
}

TEST_CASE("summary statistics") {
  const auto s = summarize({1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3)));
  CHECK(summarize({}).mean == 0.0);
}

TEST_CASE("noise-free ensemble reproduces the ideal gate") {
  const SweepParams1Q p{7.820, 1.792e-4, 160};
  const TimeGrid g{160, kDefaultSteps1Q};
  const auto r = improve_gate<OneQubit>(Gate::Hadamard, p, g);
  const auto e = noise_ensemble<OneQubit>(p, g, &r.control, r.frame, r.target, {0, 0.1, 0.3, 1}, 4);
  for (double t : e.trials) CHECK(t == r.improved_report.trace_p);
  CHECK(e.stddev == 0.0);

  const NoiseParams np{1e-3, 0.1, 0.3, 77};
  const auto a = noise_ensemble<OneQubit>(p, g, &r.control, r.frame, r.target, np, 3, 1);
  const auto b = noise_ensemble<OneQubit>(p, g, &r.control, r.frame, r.target, np, 3, 3);
  CHECK(a.trials == b.trials);
  CHECK(a.mean > r.improved_report.trace_p);
}
