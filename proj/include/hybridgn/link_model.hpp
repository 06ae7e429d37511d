#pragma once

// Physical description of a hybrid-span link and the dimensionless per-span
// quantities consumed by the FWM kernel and the quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hybridgn/units.hpp"

namespace hybridgn {

/// dB/km (power) to Np/m.
inline PerMeter attenuation_db_per_km_to_np_per_m(double a_db_per_km) {
  if (!(a_db_per_km >= 0.0)) throw std::domain_error("attenuation must be >= 0 dB/km");
  return PerMeter(a_db_per_km * std::numbers::ln10 / 10.0 / 1e3);
}

/// gamma = 2 pi n2 / (lambda A_eff).
inline NonlinearCoeff gamma_from_aeff(NonlinearIndex n2, Meters wavelength, SquareMeters a_eff) {
  if (!(n2.value() >= 0.0)) throw std::domain_error("n2 must be >= 0");
  if (!(wavelength.value() > 0.0)) throw std::domain_error("wavelength must be > 0");
  if (!(a_eff.value() > 0.0)) throw std::domain_error("effective area must be > 0");
  return NonlinearCoeff(2.0 * std::numbers::pi * n2.value() / (wavelength.value() * a_eff.value()));
}

/// One fiber type inside a span. All fields SI.
struct FiberSegment {
  std::string name;
  Meters length{};
  PerMeter attenuation{};
  GvdCoeff gvd{};  // signed; negative is anomalous dispersion
  NonlinearCoeff nonlinear_coeff{};
  std::optional<SquareMeters> a_eff;
  std::optional<NonlinearIndex> n2;

  void validate() const {
    const std::string who = name.empty() ? std::string("segment") : "segment '" + name + "'";
    if (!(length.value() > 0.0) || !std::isfinite(length.value()))
      throw std::invalid_argument(who + ": length must be > 0");
    if (!(attenuation.value() >= 0.0) || !std::isfinite(attenuation.value()))
      throw std::invalid_argument(who + ": attenuation must be >= 0");
    if (!(nonlinear_coeff.value() >= 0.0) || !std::isfinite(nonlinear_coeff.value()))
      throw std::invalid_argument(who + ": nonlinear coefficient must be >= 0");
    if (!std::isfinite(gvd.value()) || gvd.value() == 0.0)
      throw std::invalid_argument(who + ": zero-dispersion segments are unsupported");
  }

  [[nodiscard]] bool same_fiber(const FiberSegment& o) const {
    return attenuation == o.attenuation && gvd == o.gvd && nonlinear_coeff == o.nonlinear_coeff;
  }
};

/// Ordered segments of one span; the span length is the segment-length sum.
class SpanPlan {
 public:
  explicit SpanPlan(std::vector<FiberSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("span needs at least one segment");
    double total = 0.0;
    for (const auto& s : segments_) {
      s.validate();
      total += s.length.value();
    }
    span_length_ = Meters(total);
  }

  SpanPlan(std::vector<FiberSegment> segments, Meters span_length) : SpanPlan(std::move(segments)) {
    if (std::abs(span_length.value() - span_length_.value()) > 1e-12 * span_length_.value())
      throw std::invalid_argument("span length does not match the sum of segment lengths");
  }

  [[nodiscard]] const std::vector<FiberSegment>& segments() const { return segments_; }
  [[nodiscard]] Meters span_length() const { return span_length_; }

 private:
  std::vector<FiberSegment> segments_;
  Meters span_length_{};
};

/// Link-level parameters.
struct SystemConfig {
  int span_count = 1;
  Hertz symbol_rate{32e9};
  int channel_count = 1;
  std::optional<Hertz> resolution_bw;  // defaults to the symbol rate
  double noise_figure = 1.0;           // linear
  Meters carrier_wavelength{1550e-9};
  double mpi_coeff = 0.0;         // crosstalk-to-signal ratio at full link length
  double mpi_compensation = 0.0;  // fraction removed at the receiver

  [[nodiscard]] Hertz resolution_bandwidth() const { return resolution_bw.value_or(symbol_rate); }

  void validate() const {
    if (span_count < 1) throw std::invalid_argument("span count must be >= 1");
    if (channel_count < 1 || channel_count % 2 == 0)
      throw std::invalid_argument("channel count must be a positive odd integer");
    if (!(symbol_rate.value() > 0.0)) throw std::invalid_argument("symbol rate must be > 0");
    if (!(resolution_bandwidth().value() > 0.0))
      throw std::invalid_argument("resolution bandwidth must be > 0");
    if (!(carrier_wavelength.value() > 0.0)) throw std::invalid_argument("wavelength must be > 0");
    if (!(noise_figure >= 1.0)) throw std::invalid_argument("noise figure must be >= 0 dB");
    if (!(mpi_coeff >= 0.0)) throw std::invalid_argument("MPI coefficient must be >= 0");
    if (!(mpi_compensation >= 0.0 && mpi_compensation <= 1.0))
      throw std::invalid_argument("MPI compensation must lie in [0, 1]");
  }
};

/// Per-segment normalized quantities.
struct SegmentTerms {
  double nu = 0.0;           // a_k l_k / 2
  double lambda = 0.0;       // f_phi^2 / f_phi_k^2, always positive
  double phase_ratio = 0.0;  // beta2_k l_k / (beta2_avg l_s), signed
  double sigma = 0.0;        // nu_k / lambda_k
  PerWatt gamma_length{};    // gamma_k l_k
  Meters length{};
  Hertz f_phi{};
};

struct DerivedSpan {
  std::vector<SegmentTerms> segments;
  double sigma = 0.0;      // min_k sigma_k
  PerWatt gamma_worst{};   // worst-case effective nonlinear coefficient
  GvdCoeff beta2_avg{};
  Hertz f_phi{};
  Hertz bandwidth{};       // B0 = N_ch R_s
  double zeta0 = 0.0;
  double kappa = 0.0;
  int n_int = 0;           // ceil(zeta0 / pi)
  int span_count = 1;
};

namespace detail {

inline Hertz phased_array_bandwidth(GvdCoeff beta2, Meters length) {
  return Hertz(1.0 / (2.0 * std::numbers::pi * std::sqrt(std::abs(beta2.value()) * length.value())));
}

// Adjacent segments of identical fiber collapse into one. The worst-case
// coefficient is not invariant under subdivision, so it is always formed on
// this canonical segmentation.
inline std::vector<FiberSegment> merge_identical_neighbours(const std::vector<FiberSegment>& segs) {
  std::vector<FiberSegment> out;
  for (const auto& s : segs) {
    if (!out.empty() && out.back().same_fiber(s)) {
      out.back().length += s.length;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

inline PerWatt worst_case_nonlinear_coeff(const std::vector<FiberSegment>& segs, double beta2_ratio_base,
                                          double sigma) {
  // lambda_k = |beta2_k| l_k / (|beta2_avg| l_s); beta2_ratio_base = |beta2_avg| l_s
  double total = 0.0;
  double decay = 0.0;
  for (const auto& s : segs) {
    const double lambda = std::abs(s.gvd.value()) * s.length.value() / beta2_ratio_base;
    const double gl = s.nonlinear_coeff.value() * s.length.value();
    total += gl / lambda * std::exp(-decay) * 0.5 * (1.0 + std::exp(-2.0 * lambda * sigma));
    decay += 2.0 * lambda * sigma;
  }
  return PerWatt(total);
}

}  // namespace detail

inline DerivedSpan derive_span(const SpanPlan& span, const SystemConfig& sys) {
  sys.validate();
  const auto& segs = span.segments();
  const Meters ls = span.span_length();

  double signed_sum = 0.0;
  double abs_sum = 0.0;
  for (const auto& s : segs) {
    signed_sum += s.gvd.value() * s.length.value();
    abs_sum += std::abs(s.gvd.value()) * s.length.value();
  }
  if (std::abs(signed_sum) <= 1e-12 * abs_sum)
    throw std::domain_error("zero average dispersion unsupported");

  DerivedSpan d;
  d.span_count = sys.span_count;
  d.beta2_avg = GvdCoeff(signed_sum / ls.value());
  d.f_phi = detail::phased_array_bandwidth(d.beta2_avg, ls);

  const double base = std::abs(signed_sum);  // |beta2_avg| l_s
  d.sigma = INFINITY;
  d.segments.reserve(segs.size());
  for (const auto& s : segs) {
    SegmentTerms t;
    t.nu = s.attenuation.value() * s.length.value() / 2.0;
    t.f_phi = detail::phased_array_bandwidth(s.gvd, s.length);
    t.lambda = std::abs(s.gvd.value()) * s.length.value() / base;
    t.phase_ratio = s.gvd.value() * s.length.value() / signed_sum;
    t.sigma = t.nu / t.lambda;
    t.gamma_length = s.nonlinear_coeff * s.length;
    t.length = s.length;
    d.sigma = std::min(d.sigma, t.sigma);
    d.segments.push_back(t);
  }

  d.gamma_worst = detail::worst_case_nonlinear_coeff(detail::merge_identical_neighbours(segs), base, d.sigma);

  const Hertz rs = sys.symbol_rate;
  d.bandwidth = rs * static_cast<double>(sys.channel_count);
  const double bw_ratio = d.bandwidth / d.f_phi;
  d.zeta0 = bw_ratio * bw_ratio / 8.0;
  const double fr = d.f_phi / rs;
  const double ns = static_cast<double>(sys.span_count);
  d.kappa = 128.0 / 27.0 * fr * fr * ns * ns * (sys.resolution_bandwidth() / rs);
  d.n_int = static_cast<int>(std::ceil(d.zeta0 / std::numbers::pi));
  return d;
}

}  // namespace hybridgn
