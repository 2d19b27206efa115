#pragma once

// Shot-noise model of phase jitter. A realization is a sum of square pulses
// of width 2τ_f at uniform random centres with Gaussian amplitudes, the
// pulse count Poisson with mean n̄τ₀ where n̄ = P̄/(2σ²τ_f). The sample is
// then rescaled so its interval-averaged power is exactly P̄.

#include <cstdint>
#include <numbers>
#include <random>

#include "noc.hpp"
#include "parallel.hpp"

namespace nocgf {

struct NoiseParams {
  double mean_power = 0;  // P̄
  double sigma = 0.1;
  double tau_f = 0.3;
  std::uint64_t seed = 0;

  double rate() const { return mean_power / (2 * sigma * sigma * tau_f); }
};

inline void validate(const NoiseParams& p) {
  if (!(p.mean_power >= 0) || !(p.sigma > 0) || !(p.tau_f > 0))
    throw ContractViolation("NoiseParams: need power >= 0, sigma > 0, tau_f > 0");
}

class NoiseRealization {
 public:
  double tau0 = 0;
  double tau_f = 0;
  std::vector<double> centers;
  std::vector<double> amplitudes;  // before rescaling
  double scale = 0;
  bool wide_pulses = false;  // 2τ_f > τ₀/10

  long count() const { return static_cast<long>(centers.size()); }

  // Piecewise-constant evaluation via the precomputed segment table.
  double operator()(double tau) const {
    if (values_.empty()) return 0.0;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), tau);
    if (it == edges_.begin() || it == edges_.end()) return 0.0;
    return values_[static_cast<std::size_t>(it - edges_.begin() - 1)];
  }

  // The sign-function sum, evaluated term by term.
  double direct(double tau) const {
    auto sgn = [](double x) { return double((x > 0) - (x < 0)); };
    double s = 0;
    for (std::size_t i = 0; i < centers.size(); ++i)
      s += amplitudes[i] * (sgn(tau - centers[i] + tau_f) - sgn(tau - centers[i] - tau_f)) / 2;
    return scale * s;
  }

  // (1/τ₀)∫δφ² over [-τ₀/2, τ₀/2] of the rescaled sample.
  double mean_power() const {
    double acc = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      acc += values_[i] * values_[i] * (edges_[i + 1] - edges_[i]);
    return acc / tau0;
  }

  // Builds the segment table and returns the raw (unscaled) mean power.
  double build() {
    const double a = -tau0 / 2, b = tau0 / 2;
    edges_.assign({a, b});
    for (double c : centers)
      for (double e : {c - tau_f, c + tau_f})
        if (e > a && e < b) edges_.push_back(e);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    values_.assign(edges_.size() - 1, 0.0);
    double raw = 0;
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
      const double mid = 0.5 * (edges_[i] + edges_[i + 1]);
      double s = 0;
      for (std::size_t j = 0; j < centers.size(); ++j)
        if (std::abs(mid - centers[j]) < tau_f) s += amplitudes[j];
      values_[i] = s;
      raw += s * s * (edges_[i + 1] - edges_[i]);
    }
    return raw / tau0;
  }

  void apply_scale(double s) {
    scale = s;
    for (double& v : values_) v *= s;
  }

 private:
  std::vector<double> edges_;
  std::vector<double> values_;
};

inline constexpr int kMaxRealizationRetries = 16;

// Trial k of an ensemble draws from its own stream derived from (seed, k),
// so trials can run in any order or concurrently.
inline NoiseRealization sample_realization(const NoiseParams& p, double tau0,
                                           std::uint64_t trial = 0) {
  validate(p);
  NoiseRealization r;
  r.tau0 = tau0;
  r.tau_f = p.tau_f;
  r.wide_pulses = 2 * p.tau_f > tau0 / 10;
  if (p.mean_power == 0) {
    r.build();
    return r;
  }
  for (int attempt = 0; attempt < kMaxRealizationRetries; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<long> count(p.rate() * tau0);
    std::uniform_real_distribution<double> where(-tau0 / 2, tau0 / 2);
    std::normal_distribution<double> amp(0.0, p.sigma);
    const long n = count(rng);
    r.centers.resize(static_cast<std::size_t>(n));
    r.amplitudes.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
      r.centers[static_cast<std::size_t>(i)] = where(rng);
      r.amplitudes[static_cast<std::size_t>(i)] = amp(rng);
    }
    const double raw = r.build();
    if (raw > 0) {
      r.apply_scale(std::sqrt(p.mean_power / raw));
      return r;
    }
  }
  throw DegenerateRealization("sample_realization: zero raw power after retries");
}

struct JitterReport {
  double sigma_phi = 0;  // rad
  double sigma_t = 0;    // s
  double f_clock = 0;    // Hz
};

inline JitterReport jitter_report(double mean_power, double f_clock) {
  if (!(mean_power >= 0) || !(f_clock > 0))
    throw ContractViolation("jitter_report: need power >= 0 and f_clock > 0");
  const double sp = std::sqrt(mean_power);
  return {sp, sp / (2 * std::numbers::pi * f_clock), f_clock};
}

struct EnsembleResult {
  double mean = 0;
  double stddev = 0;  // divisor count - 1
  std::vector<double> trials;
};

// Welford's update, so identical trials give a stddev of exactly zero.
inline EnsembleResult summarize(std::vector<double> trials) {
  EnsembleResult r;
  r.trials = std::move(trials);
  double m2 = 0;
  std::size_t n = 0;
  for (double t : r.trials) {
    ++n;
    const double d = t - r.mean;
    r.mean += d / static_cast<double>(n);
    m2 += d * (t - r.mean);
  }
  if (n > 1) r.stddev = std::sqrt(m2 / static_cast<double>(n - 1));
  return r;
}

// Tr P with a fixed control modification under independent noise
// realizations of the twist phase.
template <class Sys>
EnsembleResult noise_ensemble(const typename Sys::Params& p, const TimeGrid& g,
                              const ControlModification* df, const GateFrame<Sys::N>& frame,
                              const Mat<Sys::N>& target, const NoiseParams& np,
                              int realizations, unsigned workers = worker_count()) {
  std::vector<double> out(static_cast<std::size_t>(std::max(0, realizations)));
  parallel_for(
      out.size(),
      [&](std::size_t k) {
        const auto r = sample_realization(np, p.tau0, k);
        PhaseNoiseFn fn;
        if (np.mean_power > 0) fn = [&r](double t) { return r(t); };
        out[k] = evaluate_gate<Sys>(p, g, df, frame, target, fn);
      },
      workers);
  return summarize(std::move(out));
}

}  // namespace nocgf
