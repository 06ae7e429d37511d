#pragma once

// gamma-tilde under the chosen span-accumulation model, and the link figures
// built on OSNR_eff = P / (a + b P + g P^3).

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "hybridgn/link_model.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn {

struct Coherent {};
struct SpanScaled {
  double epsilon = 0.0;
};
using GnVariant = std::variant<Coherent, SpanScaled>;

struct PerformanceCoeffs {
  Watts ase{};
  double mpi = 0.0;  // effective crosstalk ratio, (1 - c) * beta
  PerWattSquared nl{};
};

struct GammaResult {
  PerWattSquared gamma{};
  DerivedSpan derived;  // of the span set actually integrated
  IntegralReport report;
  double span_factor = 1.0;  // N_s^(1+eps) for SpanScaled, 1 for Coherent
};

inline GammaResult nl_coefficient(const SpanPlan& span, const SystemConfig& sys, const GnVariant& variant,
                                  const QuadratureSettings& settings) {
  GammaResult out;
  if (const auto* scaled = std::get_if<SpanScaled>(&variant)) {
    if (!(scaled->epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    SystemConfig single = sys;
    single.span_count = 1;
    out.derived = derive_span(span, single);
    out.span_factor = std::pow(static_cast<double>(sys.span_count), 1.0 + scaled->epsilon);
  } else {
    out.derived = derive_span(span, sys);
  }
  out.report = nl_integral(out.derived, settings);
  out.gamma = out.report.value * (out.derived.kappa * out.span_factor);
  if (!std::isfinite(out.gamma.value())) throw std::runtime_error("non-finite nonlinear coefficient");
  return out;
}

/// N_s F h (c/lambda) (G - 1) dnu_res, G equal to the span loss.
inline Watts ase_coefficient(const SpanPlan& span, const SystemConfig& sys) {
  sys.validate();
  double loss = 0.0;
  for (const auto& s : span.segments()) loss += s.attenuation * s.length;
  const Hertz carrier = constants::speed_of_light / sys.carrier_wavelength;
  const Joules photon = constants::planck * carrier;
  const Watts per_amp = photon * sys.resolution_bandwidth() * (sys.noise_figure * std::expm1(loss));
  return per_amp * static_cast<double>(sys.span_count);
}

inline double effective_mpi(const SystemConfig& sys) { return (1.0 - sys.mpi_compensation) * sys.mpi_coeff; }

inline double osnr_eff(Watts p, const PerformanceCoeffs& c) {
  if (!(p.value() > 0.0)) throw std::domain_error("launch power must be > 0");
  const double denom = c.ase.value() + c.mpi * p.value() + c.nl.value() * p.value() * p.value() * p.value();
  if (!(denom > 0.0)) throw std::domain_error("all noise coefficients are zero");
  return p.value() / denom;
}

/// Golden-section maximization of ln OSNR over ln P, refined by bisection on
/// the sign of d/dP [P / D(P)], i.e. of D - P D'.
inline Watts golden_section_optimal_power(const PerformanceCoeffs& c) {
  const double a = c.ase.value();
  const double g = c.nl.value();
  const double b = c.mpi;
  if (!(g > 0.0) || !(a > 0.0)) throw std::domain_error("optimal power needs positive ASE and nonlinear coefficients");
  auto objective = [&](double log_p) { return std::log(osnr_eff(Watts(std::exp(log_p)), c)); };
  const double scale = std::log(std::cbrt(a / g));
  double lo = scale - 3.0 * std::numbers::ln10;
  double hi = scale + 3.0 * std::numbers::ln10;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  // D - P D' = a + b P + g P^3 - P (b + 3 g P^2); positive below the optimum
  auto slope_sign = [&](double log_p) {
    const double p = std::exp(log_p);
    return (a + b * p + g * p * p * p) - p * (b + 3.0 * g * p * p);
  };
  lo -= 1e-6;
  hi += 1e-6;
  if (!(slope_sign(lo) > 0.0 && slope_sign(hi) < 0.0)) throw std::runtime_error("OSNR is not unimodal on the bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope_sign(mid) > 0.0 ? lo : hi) = mid;
  }
  return Watts(std::exp(0.5 * (lo + hi)));
}

/// Closed form (a / (2 g))^(1/3) when b = 0, golden section otherwise.
inline Watts optimal_power(const PerformanceCoeffs& c) {
  if (!(c.nl.value() > 0.0)) throw std::domain_error("optimal power needs a positive nonlinear coefficient");
  if (c.mpi == 0.0) return Watts(std::cbrt(c.ase.value() / (2.0 * c.nl.value())));
  return golden_section_optimal_power(c);
}

// BER(SNR) = prefactor erfc(sqrt(SNR / divisor)); the default is the usual
// PDM-16QAM approximation. Q = sqrt(2) erfc^-1(2 BER), reported in dB.
struct QMapping {
  double ber_prefactor = 3.0 / 8.0;
  double snr_divisor = 10.0;

  void validate() const {
    if (!(ber_prefactor > 0.0 && ber_prefactor <= 1.0)) throw std::invalid_argument("ber_prefactor must lie in (0, 1]");
    if (!(snr_divisor > 0.0)) throw std::invalid_argument("snr_divisor must be > 0");
  }
};

inline double ber_from_snr(double snr, const QMapping& m = {}) {
  return m.ber_prefactor * std::erfc(std::sqrt(snr / m.snr_divisor));
}

inline double snr_from_ber(double ber, const QMapping& m = {}) {
  const double t = boost::math::erfc_inv(ber / m.ber_prefactor);
  return m.snr_divisor * t * t;
}

inline double q_db_from_ber(double ber) {
  if (ber >= 0.5) return -std::numeric_limits<double>::infinity();
  if (ber <= 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * ber));
}

inline double ber_from_q_db(double q_db) {
  const double q = std::pow(10.0, q_db / 20.0);
  return 0.5 * std::erfc(q / std::numbers::sqrt2);
}

/// OSNR (in the resolution bandwidth) to Q in dB; -inf when BER >= 0.5.
inline double q_factor(double osnr, const SystemConfig& sys, const QMapping& m = {}) {
  if (!(osnr > 0.0)) throw std::domain_error("OSNR must be > 0");
  const double snr = osnr * (sys.resolution_bandwidth() / sys.symbol_rate);
  return q_db_from_ber(ber_from_snr(snr, m));
}

struct LinkPerformance {
  PerformanceCoeffs coeffs;
  GammaResult gamma;
};

inline LinkPerformance link_performance(const SpanPlan& span, const SystemConfig& sys, const GnVariant& variant,
                                        const QuadratureSettings& settings) {
  LinkPerformance out;
  out.gamma = nl_coefficient(span, sys, variant, settings);
  out.coeffs.ase = ase_coefficient(span, sys);
  out.coeffs.mpi = effective_mpi(sys);
  out.coeffs.nl = out.gamma.gamma;
  return out;
}

}  // namespace hybridgn
