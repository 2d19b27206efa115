#pragma once

// Spectrum of a sampled control modification and the ω₀.₁ bandwidth: the
// frequency beyond which |ΔF(ω)| stays under 10% of |ΔF(0)|.

#include <fftw3.h>

#include <mutex>

#include "propagate.hpp"

namespace nocgf {

inline constexpr int kDefaultPadding = 8;

struct Spectrum {
  std::vector<double> omega;      // angular, ω = 2π·frequency
  std::vector<double> magnitude;  // |Σ x_k e^{-iωτ_k}|·h
  int component = 0;
  double bin_width() const { return omega.size() > 1 ? omega[1] - omega[0] : 0.0; }
};

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Real-input DFT magnitude, zero-padded to `padding` times the sample count,
// no window.
inline Spectrum sample_spectrum(const std::vector<double>& x, double h,
                                int padding = kDefaultPadding) {
  if (x.empty() || !(h > 0) || padding < 1)
    throw ContractViolation("sample_spectrum: empty signal or bad step");
  const std::size_t n = x.size() * static_cast<std::size_t>(padding);
  const std::size_t m = n / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(m);
  fftw_plan plan;
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  std::fill(in, in + n, 0.0);
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);
  Spectrum s;
  s.omega.resize(m);
  s.magnitude.resize(m);
  const double dw = 2 * std::numbers::pi / (static_cast<double>(n) * h);
  for (std::size_t k = 0; k < m; ++k) {
    s.omega[k] = dw * static_cast<double>(k);
    s.magnitude[k] = std::hypot(out[k][0], out[k][1]) * h;
  }
  {
    std::lock_guard lk(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return s;
}

inline Spectrum control_spectrum(const ControlModification& c, int component = 0,
                                 int padding = kDefaultPadding) {
  if (component < 0 || component > 2) throw ContractViolation("control_spectrum: component");
  std::vector<double> x;
  x.reserve(c.samples.size());
  for (const auto& f : c.samples) x.push_back(f[component]);
  Spectrum s = sample_spectrum(x, c.grid.h(), padding);
  s.component = component;
  return s;
}

// Scan down from the top for the last bin at or above the threshold and
// interpolate linearly to the crossing.
inline double bandwidth_w01(const Spectrum& s, double fraction = 0.1) {
  if (s.magnitude.empty() || !(s.magnitude[0] > 0))
    throw BandwidthUndefined("bandwidth_w01: zero-frequency magnitude is not positive");
  const double thr = fraction * s.magnitude[0];
  std::size_t i = s.magnitude.size() - 1;
  while (i > 0 && s.magnitude[i] < thr) --i;
  if (i + 1 >= s.magnitude.size())
    throw BandwidthUndefined("bandwidth_w01: spectrum never falls below threshold");
  const double a = s.magnitude[i], b = s.magnitude[i + 1];
  return s.omega[i] + (a - thr) / (a - b) * (s.omega[i + 1] - s.omega[i]);
}

// Dimensionless bandwidth to MHz for a gate of physical duration t_phys (s).
inline double to_dimensionful(double omega01, double tau0, double t_phys) {
  if (!(t_phys > 0)) throw ContractViolation("to_dimensionful: t_phys must be positive");
  return omega01 * tau0 / t_phys / 1e6;
}

}  // namespace nocgf
