#pragma once

// Per-span four-wave-mixing efficiency eta(zeta), the normalized phased-array
// factor phi(zeta) and their product xi(zeta), for any number of segments.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "hybridgn/link_model.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn {

using cplx = std::complex<double>;

inline constexpr double kSeriesSwitch = 1e-4;
inline constexpr double kPoleWindow = 1e-6;

/// (1 - e^{-x}) / x for Re x >= 0, without cancellation anywhere.
inline cplx effective_length_factor(cplx x) {
  if (std::abs(x) < kSeriesSwitch) {
    return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
  }
  const double xr = x.real();
  const double xi = x.imag();
  const double decay = std::exp(-xr);
  const double half_sin = std::sin(xi / 2.0);
  // 1 - e^{-xr} cos xi = -expm1(-xr) + e^{-xr} (1 - cos xi); both terms >= 0
  const cplx numer(-std::expm1(-xr) + decay * 2.0 * half_sin * half_sin, decay * std::sin(xi));
  return numer / x;
}

/// x_k(zeta) = 2 (nu_k + i lambda_k zeta); lambda_k carries the dispersion sign.
inline cplx normalized_attenuation(const SegmentTerms& t, double zeta) {
  return {2.0 * t.nu, 2.0 * t.phase_ratio * zeta};
}

/// Complex effective length of segment k, in meters.
inline cplx complex_effective_length(std::size_t k, double zeta, const DerivedSpan& d) {
  if (k >= d.segments.size()) throw std::out_of_range("segment index");
  const auto& t = d.segments[k];
  return t.length.value() * effective_length_factor(normalized_attenuation(t, zeta));
}

namespace detail {

// sum_k gamma_k e^{-sum_{m<k} x_m} L_eff_k, in 1/W.
inline cplx fwm_amplitude(double zeta, const DerivedSpan& d) {
  cplx total{0.0, 0.0};
  cplx upstream{0.0, 0.0};
  for (const auto& t : d.segments) {
    const cplx x = normalized_attenuation(t, zeta);
    total += t.gamma_length.value() * std::exp(-upstream) * effective_length_factor(x);
    upstream += x;
  }
  return total;
}

}  // namespace detail

/// eta(zeta) = |sum_k gamma_hat_k L_hat_eff_k|^2.
inline PerWattSquared fwm_efficiency(double zeta, const DerivedSpan& d) {
  return PerWattSquared(std::norm(detail::fwm_amplitude(zeta, d)));
}

/// N_s phi(zeta) as the cosine (Fejer) sum; pole free.
inline double fejer_cosine_sum(double zeta, int span_count) {
  const double n = span_count;
  double acc = 1.0;
  for (int j = 1; j < span_count; ++j) {
    acc += 2.0 * (1.0 - j / n) * std::cos(2.0 * j * zeta);
  }
  return acc;
}

/// N_s phi(zeta) as sin^2(N_s zeta) / (N_s sin^2 zeta); undefined at multiples of pi.
/// Both squares are pi-periodic, so zeta is first reduced to [-pi/2, pi/2]; this
/// keeps N_s zeta small and avoids losing digits next to the poles.
inline double fejer_sine_ratio(double zeta, int span_count) {
  const double n = span_count;
  const double x = zeta - std::round(zeta / std::numbers::pi) * std::numbers::pi;
  const double r = std::sin(n * x) / std::sin(x);
  return r * r / n;
}

/// Normalized phased-array factor phi(zeta) in [0, 1].
inline double phased_array(double zeta, int span_count, double pole_window = kPoleWindow) {
  if (span_count < 1) throw std::invalid_argument("span count must be >= 1");
  if (span_count == 1) return 1.0;
  const double n = span_count;
  const double offset = zeta - std::round(zeta / std::numbers::pi) * std::numbers::pi;
  if (std::abs(offset) < pole_window) return fejer_cosine_sum(zeta, span_count) / n;
  return fejer_sine_ratio(zeta, span_count) / n;
}

inline PerWattSquared xi(double zeta, const DerivedSpan& d, double pole_window = kPoleWindow) {
  return fwm_efficiency(zeta, d) * phased_array(zeta, d.span_count, pole_window);
}

/// Gamma^2 / (sigma^2 + zeta^2), the majorant of eta.
inline PerWattSquared fwm_efficiency_bound(double zeta, const DerivedSpan& d) {
  return d.gamma_worst * d.gamma_worst / (d.sigma * d.sigma + zeta * zeta);
}

}  // namespace hybridgn
