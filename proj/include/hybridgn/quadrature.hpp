#pragma once

// I = int_0^zeta0 ln(zeta0/zeta) xi(zeta) dzeta.
//
// The logarithmic singularity at zero is handled analytically on [0, delta];
// [delta, zeta0] is cut into panels aligned to multiples of pi (the period of
// phi) and each panel is integrated with composite Simpson at a node spacing
// of pi / (N_s N_n). The tail beyond (M+1) pi may be dropped once its rigorous
// bound is below the requested relative error.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hybridgn/fwm_kernel.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/special_functions.hpp"
#include "hybridgn/summation.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn {

struct QuadratureSettings {
  double delta_safety = 0.1;
  int nodes_per_oscillation = 16;
  double target_rel_truncation = 1e-4;
  bool truncation_enabled = true;
  double pole_window = kPoleWindow;
  unsigned workers = 1;

  void validate() const {
    if (!(delta_safety > 0.0 && delta_safety < 1.0))
      throw std::invalid_argument("delta_safety must lie in (0, 1)");
    if (nodes_per_oscillation < 4) throw std::invalid_argument("nodes_per_oscillation must be >= 4");
    if (!(target_rel_truncation > 0.0 && target_rel_truncation < 1.0))
      throw std::invalid_argument("target_rel_truncation must lie in (0, 1)");
    if (!(pole_window > 0.0 && pole_window < 0.1)) throw std::invalid_argument("pole_window must lie in (0, 0.1)");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  }
};

/// Breakdown of I. All integral fields carry the units of eta (1/W^2);
/// tail_bound bounds the neglected part of I itself (not N_s I).
struct IntegralReport {
  PerWattSquared value{};
  PerWattSquared head_value{};
  PerWattSquared body_value{};
  PerWattSquared tail_bound{};
  PerWattSquared head_closed_form{};
  double delta = 0.0;
  double upper_limit = 0.0;
  int panels_evaluated = 0;
  std::optional<int> truncation_M;
};

// ---------------------------------------------------------------------------
// Closed-form pieces near the singularity

/// delta = min(safety * 3 sqrt(3) / N_s, zeta0 / 2).
inline double delta_rule(int span_count, double zeta0, const QuadratureSettings& settings) {
  if (span_count < 1) throw std::invalid_argument("span count must be >= 1");
  return std::min(settings.delta_safety * 3.0 * std::sqrt(3.0) / span_count, zeta0 / 2.0);
}

/// int_0^x N_s phi(zeta) dzeta = x + sum_{j<N_s} (1/j - 1/N_s) sin(2 j x).
inline double fejer_integral(double x, int span_count) {
  const double n = span_count;
  double acc = x;
  for (int j = 1; j < span_count; ++j) acc += (1.0 / j - 1.0 / n) * std::sin(2.0 * j * x);
  return acc;
}

/// K(delta) = int_0^delta ln(delta/zeta) N_s phi(zeta) dzeta
///          = delta + sum_{j<N_s} (1/j - 1/N_s) Si(2 j delta).
inline double fejer_log_integral(double delta, int span_count) {
  const double n = span_count;
  double acc = delta;
  for (int j = 1; j < span_count; ++j) acc += (1.0 / j - 1.0 / n) * sine_integral(2.0 * j * delta);
  return acc;
}

/// I(0, delta) with eta frozen at eta(0).
inline PerWattSquared singular_head(double delta, const DerivedSpan& d) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be > 0");
  if (delta > d.zeta0) throw std::domain_error("delta exceeds zeta0");
  const int ns = d.span_count;
  const PerWattSquared eta0 = fwm_efficiency(0.0, d);
  return eta0 / static_cast<double>(ns) *
         (std::log(d.zeta0 / delta) * fejer_integral(delta, ns) + fejer_log_integral(delta, ns));
}

/// Gamma^2 / sigma^2 [ln(zeta0/delta) + 1] delta.
inline PerWattSquared singular_head_bound(double delta, const DerivedSpan& d) {
  const PerWattSquared g2 = d.gamma_worst * d.gamma_worst;
  if (d.sigma == 0.0) return PerWattSquared(INFINITY);
  return g2 / (d.sigma * d.sigma) * ((std::log(d.zeta0 / delta) + 1.0) * delta);
}

// ---------------------------------------------------------------------------
// Simpson panels

inline int even_intervals(double width, double spacing, int at_least) {
  int n = std::max(at_least, static_cast<int>(std::ceil(width / spacing - 1e-9)));
  if (n % 2) ++n;
  return std::max(n, 2);
}

/// Composite Simpson with n (even) intervals.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n < 2 || n % 2) throw std::invalid_argument("simpson needs an even interval count");
  const double h = (b - a) / n;
  CompensatedSum acc;
  acc.add(f(a));
  acc.add(f(b));
  for (int i = 1; i < n; ++i) acc.add((i % 2 ? 4.0 : 2.0) * f(a + i * h));
  return acc.get() * h / 3.0;
}

struct Panel {
  double lo;
  double hi;
};

/// [lo, hi] cut at every multiple of pi strictly inside it.
inline std::vector<Panel> pi_panels(double lo, double hi) {
  if (!(lo < hi)) throw std::domain_error("panel limits must be increasing");
  std::vector<Panel> out;
  double left = lo;
  auto k = static_cast<long long>(std::floor(lo / std::numbers::pi)) + 1;
  for (;; ++k) {
    const double edge = static_cast<double>(k) * std::numbers::pi;
    if (edge >= hi) break;
    if (edge > left) {
      out.push_back({left, edge});
      left = edge;
    }
  }
  out.push_back({left, hi});
  return out;
}

/// One panel at spacing pi / (N_s N_n), never fewer than N_n intervals. Where
/// the panel is wide relative to its distance from zero the ln weight varies
/// on the scale of zeta itself, so the panel is cut into dyadic pieces
/// [u, 2u] of at least 2 N_n intervals each.
template <class F>
double panel_integral(F&& g, Panel p, int span_count, int nodes_per_oscillation) {
  const double spacing = std::numbers::pi / (static_cast<double>(span_count) * nodes_per_oscillation);
  if (p.lo > 0.0 && p.hi > 1.5 * p.lo) {
    CompensatedSum acc;
    double a = p.lo;
    while (a < p.hi) {
      const double b = (2.0 * a < p.hi) ? 2.0 * a : p.hi;
      acc.add(simpson(g, a, b, even_intervals(b - a, spacing, 2 * nodes_per_oscillation)));
      a = b;
    }
    return acc.get();
  }
  return simpson(g, p.lo, p.hi, even_intervals(p.hi - p.lo, spacing, nodes_per_oscillation));
}

/// Panel values for g over panels[first, last), possibly on several threads.
/// Each value depends only on its panel, so the result does not depend on
/// the worker count.
template <class F>
void evaluate_panels(const F& g, const std::vector<Panel>& panels, std::size_t first, std::size_t last,
                     int span_count, int nodes_per_oscillation, unsigned workers, std::vector<double>& out) {
  const std::size_t count = last - first;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (used <= 1) {
    for (std::size_t i = first; i < last; ++i) out[i] = panel_integral(g, panels[i], span_count, nodes_per_oscillation);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = first + w; i < last; i += used)
        out[i] = panel_integral(g, panels[i], span_count, nodes_per_oscillation);
    });
  }
}

/// int_lo^hi g over pi-aligned panels; returns the per-panel values in order.
template <class F>
std::vector<double> integrate_panels(const F& g, double lo, double hi, int span_count,
                                     const QuadratureSettings& settings) {
  const auto panels = pi_panels(lo, hi);
  std::vector<double> values(panels.size());
  evaluate_panels(g, panels, 0, panels.size(), span_count, settings.nodes_per_oscillation, settings.workers,
                  values);
  return values;
}

/// int_lo^hi ln(zeta0/zeta) xi(zeta) dzeta for 0 < lo < hi <= zeta0.
inline PerWattSquared integrate_body(double lo, double hi, const DerivedSpan& d, const QuadratureSettings& settings) {
  if (!(lo > 0.0 && lo < hi && hi <= d.zeta0 * (1.0 + 1e-15)))
    throw std::domain_error("body limits must satisfy 0 < lo < hi <= zeta0");
  const double z0 = d.zeta0;
  const double pw = settings.pole_window;
  auto g = [&](double z) { return std::log(z0 / z) * xi(z, d, pw).value(); };
  const auto values = integrate_panels(g, lo, hi, d.span_count, settings);
  return PerWattSquared(compensated_sum(values));
}

// ---------------------------------------------------------------------------
// Truncation

struct TailBound {
  PerWattSquared tight{};  // Gamma^2 arccot(M pi / sigma) / sigma * ln(zeta0 / (M pi))
  PerWattSquared loose{};  // Gamma^2 / (M pi) * ln(zeta0 / (M pi))
  double mu = 0.0;         // (M + 1) pi
};

/// Bounds on N_s I((M+1) pi, zeta0).
inline TailBound truncation_bound(int m, const DerivedSpan& d) {
  if (m < 1) throw std::domain_error("truncation index must be >= 1");
  const double mu = (m + 1) * std::numbers::pi;
  if (!(mu < d.zeta0)) throw std::domain_error("truncation point lies beyond zeta0");
  const double m_pi = m * std::numbers::pi;
  const PerWattSquared g2 = d.gamma_worst * d.gamma_worst;
  const double log_factor = std::log(d.zeta0 / m_pi);
  TailBound b;
  b.mu = mu;
  b.loose = g2 * (log_factor / m_pi);
  // arccot(M pi / sigma) / sigma -> 1 / (M pi) as sigma -> 0
  const double arccot_over_sigma = d.sigma > 0.0 ? std::atan2(d.sigma, m_pi) / d.sigma : 1.0 / m_pi;
  b.tight = std::min(g2 * (arccot_over_sigma * log_factor), b.loose);
  return b;
}

inline bool truncation_admissible(int m, const DerivedSpan& d, double target, PerWattSquared running_estimate) {
  const double denom = d.span_count * running_estimate.value();
  if (!(denom > 0.0)) return false;
  return truncation_bound(m, d).tight.value() / denom <= target;
}

/// Smallest M whose tight bound meets the target relative error, or none.
inline std::optional<int> choose_truncation(const DerivedSpan& d, const QuadratureSettings& settings,
                                            PerWattSquared running_estimate) {
  if (!settings.truncation_enabled) return std::nullopt;
  for (int m = 1; (m + 1) * std::numbers::pi < d.zeta0; ++m) {
    if (truncation_admissible(m, d, settings.target_rel_truncation, running_estimate)) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Whole integral

namespace detail {

// Head of int_0^upper ln(log_ref/zeta) xi dzeta on [0, delta]:
//   ln(log_ref/delta) int_0^delta xi                      (Simpson)
// + eta(0)/N_s K(delta)                                   (closed form)
// + int_0^delta ln(delta/zeta) (eta - eta(0)) phi         (Simpson; integrand -> 0 at 0)
// The last term is what the frozen-eta closed form drops.
inline PerWattSquared numerical_head(double delta, double log_ref, const DerivedSpan& d,
                                     const QuadratureSettings& settings) {
  const int ns = d.span_count;
  const double pw = settings.pole_window;
  const double spacing = std::numbers::pi / (static_cast<double>(ns) * settings.nodes_per_oscillation);
  const int n = even_intervals(delta, spacing, settings.nodes_per_oscillation);
  const double eta0 = fwm_efficiency(0.0, d).value();
  const double xi_mass = simpson([&](double z) { return xi(z, d, pw).value(); }, 0.0, delta, n);
  auto correction = [&](double z) {
    if (z == 0.0) return 0.0;
    return std::log(delta / z) * (fwm_efficiency(z, d).value() - eta0) * phased_array(z, ns, pw);
  };
  const double frozen = eta0 * fejer_log_integral(delta, ns) / static_cast<double>(ns);
  return PerWattSquared(std::log(log_ref / delta) * xi_mass + frozen + simpson(correction, 0.0, delta, n));
}

}  // namespace detail

/// int_0^upper ln(log_ref/zeta) xi(zeta) dzeta, optionally truncated.
/// With log_ref = upper = zeta0 this is the nonlinear-noise integral I.
inline IntegralReport integrate_log_weighted(const DerivedSpan& d, const QuadratureSettings& settings,
                                             double log_ref, double upper, bool allow_truncation,
                                             std::optional<double> delta_override = std::nullopt) {
  settings.validate();
  if (!(upper > 0.0 && upper <= log_ref * (1.0 + 1e-15)))
    throw std::domain_error("upper limit must lie in (0, log reference]");

  IntegralReport rep;
  rep.delta = delta_override.value_or(std::min(delta_rule(d.span_count, d.zeta0, settings), upper / 2.0));
  if (!(rep.delta > 0.0 && rep.delta < upper)) throw std::domain_error("delta must lie in (0, upper)");
  rep.head_value = detail::numerical_head(rep.delta, log_ref, d, settings);
  if (log_ref == d.zeta0) rep.head_closed_form = singular_head(rep.delta, d);

  const double pw = settings.pole_window;
  auto g = [&](double z) { return std::log(log_ref / z) * xi(z, d, pw).value(); };
  const auto panels = pi_panels(rep.delta, upper);
  const bool truncate = allow_truncation && settings.truncation_enabled;

  std::vector<double> values(panels.size());
  CompensatedSum body;
  std::size_t next = 0;
  const std::size_t batch = truncate ? std::max<std::size_t>(32, 8 * settings.workers) : panels.size();
  bool stopped = false;
  while (next < panels.size() && !stopped) {
    const std::size_t last = std::min(panels.size(), next + batch);
    evaluate_panels(g, panels, next, last, d.span_count, settings.nodes_per_oscillation, settings.workers, values);
    for (std::size_t i = next; i < last; ++i) {
      body.add(values[i]);
      rep.panels_evaluated = static_cast<int>(i + 1);
      if (!truncate || i + 1 == panels.size()) continue;
      const double edge = panels[i].hi;
      const long long k = std::llround(edge / std::numbers::pi);
      const int m = static_cast<int>(k) - 1;
      if (m < 1 || !(edge < d.zeta0)) continue;
      const PerWattSquared running = rep.head_value + PerWattSquared(body.get());
      if (truncation_admissible(m, d, settings.target_rel_truncation, running)) {
        rep.truncation_M = m;
        rep.tail_bound = truncation_bound(m, d).tight / static_cast<double>(d.span_count);
        rep.upper_limit = edge;
        stopped = true;
        break;
      }
    }
    next = last;
  }
  if (!stopped) rep.upper_limit = upper;
  rep.body_value = PerWattSquared(body.get());
  rep.value = rep.head_value + rep.body_value;
  return rep;
}

/// I = int_0^zeta0 ln(zeta0/zeta) xi(zeta) dzeta (head + body, tail dropped if allowed).
inline IntegralReport nl_integral(const DerivedSpan& d, const QuadratureSettings& settings) {
  return integrate_log_weighted(d, settings, d.zeta0, d.zeta0, true);
}

/// int_0^upper xi(zeta) dzeta; xi is bounded at 0 so no special head.
inline PerWattSquared xi_integral(double upper, const DerivedSpan& d, const QuadratureSettings& settings) {
  if (!(upper > 0.0)) throw std::domain_error("upper limit must be > 0");
  const double pw = settings.pole_window;
  auto g = [&](double z) { return xi(z, d, pw).value(); };
  return PerWattSquared(compensated_sum(integrate_panels(g, 0.0, upper, d.span_count, settings)));
}

/// The truncated-region decomposition into I_2 = ln(zeta0/mu) int_0^mu xi and
/// I_13 = int_0^mu ln(mu/zeta) xi; their sum equals int_0^mu ln(zeta0/zeta) xi.
struct RegionSplit {
  PerWattSquared central{};  // I_2
  PerWattSquared wings{};    // I_1 + I_3
};

inline RegionSplit truncated_region_split(double mu, const DerivedSpan& d, const QuadratureSettings& settings) {
  if (!(mu > 0.0 && mu <= d.zeta0)) throw std::domain_error("mu must lie in (0, zeta0]");
  RegionSplit r;
  r.central = xi_integral(mu, d, settings) * std::log(d.zeta0 / mu);
  r.wings = integrate_log_weighted(d, settings, mu, mu, false).value;
  return r;
}

}  // namespace hybridgn
