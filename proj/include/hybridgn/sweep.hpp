#pragma once

// Launch-power and fiber-split sweeps.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hybridgn/gn_engine.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn {

struct PowerRow {
  Watts power{};
  double osnr = 0.0;
  double q_db = 0.0;
};

inline std::vector<PowerRow> sweep_power(const SpanPlan& span, const SystemConfig& sys, const GnVariant& variant,
                                         const QuadratureSettings& settings, const std::vector<Watts>& grid,
                                         const QMapping& mapping = {}) {
  if (grid.empty()) throw std::invalid_argument("power grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("power grid must be strictly increasing");
  const auto perf = link_performance(span, sys, variant, settings);
  std::vector<PowerRow> rows;
  rows.reserve(grid.size());
  for (const Watts p : grid) {
    PowerRow r;
    r.power = p;
    r.osnr = osnr_eff(p, perf.coeffs);
    r.q_db = q_factor(r.osnr, sys, mapping);
    rows.push_back(r);
  }
  return rows;
}

/// Power grid from pmin to pmax dBm inclusive, floor(range / step) + 1 points.
inline std::vector<Watts> dbm_grid(double pmin_dbm, double pmax_dbm, double step_db) {
  if (!(step_db > 0.0)) throw std::invalid_argument("power step must be > 0");
  if (!(pmax_dbm >= pmin_dbm)) throw std::invalid_argument("power range is reversed");
  const auto count = static_cast<long long>(std::floor((pmax_dbm - pmin_dbm) / step_db + 1e-9)) + 1;
  std::vector<Watts> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(convert::dbm_to_watts(pmin_dbm + static_cast<double>(i) * step_db));
  return out;
}

struct SplitSweepRow {
  Meters segment1_length{};
  double split_ratio = 0.0;
  PerWattSquared gamma{};
  Watts ase{};
  double mpi = 0.0;
  Watts p_opt{};
  double osnr_opt = 0.0;
  double q_opt_db = 0.0;
};

/// MPI coefficient (before compensation) as a function of the split ratio.
using MpiModel = std::function<double(double split_ratio)>;

/// Two-segment spans (fiber_a first) for l1 in {0, step, ..., span_length}.
/// The lengths stored in fiber_a and fiber_b are ignored.
inline std::vector<SplitSweepRow> sweep_split(const FiberSegment& fiber_a, const FiberSegment& fiber_b,
                                              Meters span_length, const SystemConfig& sys, const GnVariant& variant,
                                              const QuadratureSettings& settings, Meters step,
                                              const MpiModel& mpi_model = {}, const QMapping& mapping = {}) {
  if (!(span_length.value() > 0.0)) throw std::domain_error("span length must be > 0");
  if (!(step.value() > 0.0)) throw std::domain_error("split step must be > 0");
  const double ratio = span_length / step;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio) throw std::domain_error("split step must divide the span length");
  const auto count = static_cast<int>(n);

  std::vector<SplitSweepRow> rows;
  rows.reserve(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) {
    const Meters l1 = (i == count) ? span_length : span_length * (static_cast<double>(i) / n);
    const Meters l2 = span_length - l1;
    std::vector<FiberSegment> segs;
    if (l1.value() > 0.0) {
      segs.push_back(fiber_a);
      segs.back().length = l1;
    }
    if (l2.value() > 0.0) {
      segs.push_back(fiber_b);
      segs.back().length = l2;
    }
    const SpanPlan span(std::move(segs));

    SplitSweepRow r;
    r.segment1_length = l1;
    r.split_ratio = l1 / span_length;
    SystemConfig row_sys = sys;
    if (mpi_model) row_sys.mpi_coeff = mpi_model(r.split_ratio);
    const auto perf = link_performance(span, row_sys, variant, settings);
    r.gamma = perf.coeffs.nl;
    r.ase = perf.coeffs.ase;
    r.mpi = perf.coeffs.mpi;
    r.p_opt = optimal_power(perf.coeffs);
    r.osnr_opt = osnr_eff(r.p_opt, perf.coeffs);
    r.q_opt_db = q_factor(r.osnr_opt, row_sys, mapping);
    rows.push_back(r);
  }
  return rows;
}

/// Row with the largest Q_opt; rows within 1e-12 dB of the best count as
/// tied and the one with the smallest segment-1 length wins.
inline SplitSweepRow optimal_split(const std::vector<SplitSweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows");
  double best = rows.front().q_opt_db;
  for (const auto& r : rows) best = std::max(best, r.q_opt_db);
  const SplitSweepRow* pick = nullptr;
  for (const auto& r : rows) {
    if (r.q_opt_db >= best - 1e-12 && (!pick || r.segment1_length < pick->segment1_length)) pick = &r;
  }
  return *pick;
}

}  // namespace hybridgn
