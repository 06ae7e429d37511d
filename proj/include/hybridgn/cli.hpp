#pragma once

// Command dispatch for the hybridgn tool. run_cli never writes partial
// results: output is assembled in memory and emitted only on success.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridgn/gn_engine.hpp"
#include "hybridgn/io.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/oracle.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/sweep.hpp"

namespace hybridgn::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::string output;
  std::string format;
  std::string variant;
  std::optional<double> epsilon;
  bool no_truncation = false;
  std::optional<int> threads;
};

inline void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("--config", f.config, "JSON configuration file")->required();
  cmd.add_option("--output", f.output, "write results here instead of stdout");
  cmd.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--variant", f.variant, "coherent or span-scaled")->check(CLI::IsMember({"coherent", "span-scaled"}));
  cmd.add_option("--epsilon", f.epsilon, "coherence exponent for span-scaled");
  cmd.add_flag("--no-truncation", f.no_truncation, "integrate the full range");
  cmd.add_option("--threads", f.threads, "quadrature worker threads")->check(CLI::Range(1, 1024));
}

inline io::RunConfig resolve(const CommonFlags& f) {
  io::RunConfig cfg = io::load_config(f.config);
  if (!f.format.empty()) cfg.output_format = f.format;
  if (!f.output.empty()) cfg.output_path = f.output;
  if (f.no_truncation) cfg.quadrature.truncation_enabled = false;
  if (f.threads) cfg.quadrature.workers = static_cast<unsigned>(*f.threads);
  if (f.variant == "coherent") {
    if (f.epsilon) throw io::ConfigError("--epsilon requires --variant span-scaled");
    cfg.variant = Coherent{};
  } else if (f.variant == "span-scaled") {
    cfg.variant = SpanScaled{f.epsilon.value_or(0.0)};
  } else if (f.epsilon) {
    auto* s = std::get_if<SpanScaled>(&cfg.variant);
    if (!s) throw io::ConfigError("--epsilon requires the span-scaled variant");
    s->epsilon = *f.epsilon;
  }
  if (const auto* s = std::get_if<SpanScaled>(&cfg.variant); s && !(s->epsilon >= 0.0))
    throw io::ConfigError("epsilon must be >= 0");
  return cfg;
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalError(std::string("non-finite ") + what);
}

inline std::string variant_name(const GnVariant& v) {
  return std::holds_alternative<Coherent>(v) ? "coherent" : "span_scaled";
}

inline double variant_epsilon(const GnVariant& v) {
  const auto* s = std::get_if<SpanScaled>(&v);
  return s ? s->epsilon : 0.0;
}

inline std::string cmd_gamma(const io::RunConfig& cfg) {
  const auto res = nl_coefficient(cfg.span(), cfg.system, cfg.variant, cfg.quadrature);
  const auto& d = res.derived;
  const auto& r = res.report;
  require_finite(r.value.value(), "integral");
  const double g = res.gamma.value();
  io::Record rec{
      {"variant", variant_name(cfg.variant)},
      {"epsilon", variant_epsilon(cfg.variant)},
      {"spans", static_cast<long long>(cfg.system.span_count)},
      {"integrated_spans", static_cast<long long>(d.span_count)},
      {"f_phi_hz", d.f_phi.value()},
      {"zeta0", d.zeta0},
      {"n_int", static_cast<long long>(d.n_int)},
      {"n_panels", static_cast<long long>(d.n_int)},
      {"panels_evaluated", static_cast<long long>(r.panels_evaluated)},
      {"truncation_m", r.truncation_M ? io::Cell(static_cast<long long>(*r.truncation_M)) : io::Cell("none")},
      {"upper_limit", r.upper_limit},
      {"sigma", d.sigma},
      {"gamma_worst_per_w", d.gamma_worst.value()},
      {"kappa", d.kappa},
      {"span_factor", res.span_factor},
      {"delta", r.delta},
      {"head", r.head_value.value()},
      {"head_closed_form", r.head_closed_form.value()},
      {"body", r.body_value.value()},
      {"tail_bound", r.tail_bound.value()},
      {"integral", r.value.value()},
      {"gamma_tilde_per_w2", g},
      {"gamma_tilde_db_per_mw2", 10.0 * std::log10(g * 1e-6)},
  };
  return cfg.output_format == "json" ? io::record_json(rec) : io::record_csv(rec);
}

inline std::string cmd_sweep_power(const io::RunConfig& cfg, double pmin_dbm, double pmax_dbm, double step_db) {
  std::vector<Watts> grid;
  try {
    grid = dbm_grid(pmin_dbm, pmax_dbm, step_db);
  } catch (const std::invalid_argument& e) {
    throw io::ConfigError(e.what());
  }
  const auto perf = link_performance(cfg.span(), cfg.system, cfg.variant, cfg.quadrature);
  io::Table t;
  t.columns = io::kPowerSweepColumns;
  t.meta = {{"gamma_tilde_per_w2", perf.coeffs.nl.value()},
            {"ase_w", perf.coeffs.ase.value()},
            {"mpi", perf.coeffs.mpi},
            {"p_opt_dbm", convert::watts_to_dbm(optimal_power(perf.coeffs))}};
  for (const Watts p : grid) {
    const double osnr = osnr_eff(p, perf.coeffs);
    require_finite(osnr, "OSNR");
    t.rows.push_back({convert::watts_to_dbm(p), convert::linear_to_db(osnr), q_factor(osnr, cfg.system, cfg.q_mapping)});
  }
  return cfg.output_format == "json" ? io::table_json(t) : io::table_csv(t);
}

inline std::string cmd_sweep_split(const io::RunConfig& cfg, double step_km) {
  if (cfg.segments.size() != 2) throw io::ConfigError("/span: sweep-split needs exactly two segments (fiber A, fiber B)");
  const Meters total = cfg.span().span_length();
  const Meters step = convert::km(step_km);
  const double ratio = total / step;
  if (!(step_km > 0.0) || std::round(ratio) < 1.0 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw io::ConfigError("--step-km must divide the span length");
  const auto rows = sweep_split(cfg.segments[0], cfg.segments[1], total, cfg.system, cfg.variant, cfg.quadrature, step,
                                {}, cfg.q_mapping);
  const auto best = optimal_split(rows);
  io::Table t;
  t.columns = io::kSplitSweepColumns;
  t.meta = {{"fiber_a", cfg.segments[0].name}, {"fiber_b", cfg.segments[1].name}, {"span_km", total.value() / 1e3}};
  for (const auto& r : rows) {
    require_finite(r.q_opt_db, "Q factor");
    t.rows.push_back({r.segment1_length.value() / 1e3, r.split_ratio, r.gamma.value(), r.ase.value(), r.mpi,
                      convert::watts_to_dbm(r.p_opt), convert::linear_to_db(r.osnr_opt), r.q_opt_db,
                      static_cast<long long>(r.segment1_length == best.segment1_length)});
  }
  t.footer = "optimum segment1_km=" + io::format_number(best.segment1_length.value() / 1e3) +
             " split_ratio=" + io::format_number(best.split_ratio) + " q_opt_db=" + io::format_number(best.q_opt_db);
  return cfg.output_format == "json" ? io::table_json(t) : io::table_csv(t);
}

/// Down-scaled copy used by the check command: 3 channels at 1 GBd and at
/// most two spans, small enough for the 2-D oracle.
inline SystemConfig downscale(const SystemConfig& s) {
  SystemConfig out = s;
  out.channel_count = 3;
  out.symbol_rate = convert::ghz(1.0);
  out.resolution_bw.reset();
  out.span_count = std::min(s.span_count, 2);
  return out;
}

inline std::string cmd_check(const io::RunConfig& cfg, int grid) {
  if (grid < 32 || grid % 2) throw io::ConfigError("--grid must be an even integer >= 32");
  const SystemConfig small = downscale(cfg.system);
  QuadratureSettings q = cfg.quadrature;
  q.truncation_enabled = false;
  const auto single = nl_coefficient(cfg.span(), small, Coherent{}, q);
  const double brute = gamma_from_double_integral(brute_force_gamma_integral(single.derived, grid, q.pole_window),
                                                  single.derived).value();
  require_finite(single.gamma.value(), "single-integral value");
  require_finite(brute, "double-integral value");
  const double dev = std::abs(single.gamma.value() - brute) / std::abs(brute);
  require_finite(dev, "relative deviation");
  io::Record rec{
      {"spans", static_cast<long long>(small.span_count)},
      {"channels", static_cast<long long>(small.channel_count)},
      {"symbol_rate_hz", small.symbol_rate.value()},
      {"zeta0", single.derived.zeta0},
      {"grid", static_cast<long long>(grid)},
      {"gamma_single_per_w2", single.gamma.value()},
      {"gamma_double_per_w2", brute},
      {"rel_deviation", dev},
      {"within_tolerance", std::string(dev < 5e-3 ? "true" : "false")},
  };
  return cfg.output_format == "json" ? io::record_json(rec) : io::record_csv(rec);
}

inline std::string cmd_bound(const io::RunConfig& cfg, const std::vector<int>& ms) {
  const auto d = derive_span(cfg.span(), cfg.system);
  io::Table t;
  t.columns = io::kBoundColumns;
  t.meta = {{"zeta0", d.zeta0}, {"sigma", d.sigma}, {"gamma_worst_per_w", d.gamma_worst.value()}};
  for (const int m : ms) {
    TailBound b;
    try {
      b = truncation_bound(m, d);
    } catch (const std::domain_error& e) {
      throw io::ConfigError("--m-list: M=" + std::to_string(m) + ": " + e.what());
    }
    t.rows.push_back({static_cast<long long>(m), b.mu, b.tight.value(), b.loose.value()});
  }
  return cfg.output_format == "json" ? io::table_json(t) : io::table_csv(t);
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear-noise coefficient and link performance for hybrid fiber spans", "hybridgn"};
  app.require_subcommand(1);

  CommonFlags flags;
  double pmin = -5.0, pmax = 5.0, pstep = 0.5, step_km = 5.0;
  int grid = 256;
  std::vector<int> m_list{5, 10, 20, 50};

  auto* gamma = app.add_subcommand("gamma", "nonlinear coefficient and integration report");
  add_common(*gamma, flags);
  auto* sp = app.add_subcommand("sweep-power", "OSNR and Q versus launch power");
  add_common(*sp, flags);
  sp->add_option("--pmin-dbm", pmin, "lowest launch power per channel");
  sp->add_option("--pmax-dbm", pmax, "highest launch power per channel");
  sp->add_option("--step-db", pstep, "power step");
  auto* ss = app.add_subcommand("sweep-split", "peak Q versus length of the first fiber");
  add_common(*ss, flags);
  ss->add_option("--step-km", step_km, "first-segment length step");
  auto* check = app.add_subcommand("check", "single integral against the 2-D oracle on a down-scaled system");
  add_common(*check, flags);
  check->add_option("--grid", grid, "oracle grid intervals per axis");
  auto* bound = app.add_subcommand("bound", "truncation bounds for a list of M");
  add_common(*bound, flags);
  bound->add_option("--m-list", m_list, "comma-separated truncation indices")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::string text;
  std::string path;
  try {
    const io::RunConfig cfg = resolve(flags);
    path = cfg.output_path;
    if (*gamma) text = cmd_gamma(cfg);
    else if (*sp) text = cmd_sweep_power(cfg, pmin, pmax, pstep);
    else if (*ss) text = cmd_sweep_split(cfg, step_km);
    else if (*check) text = cmd_check(cfg, grid);
    else text = cmd_bound(cfg, m_list);
  } catch (const io::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }

  if (path.empty() || path == "-") {
    out << text;
    return kOk;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) {
    err << "config error: cannot write '" << path << "'\n";
    return kConfigError;
  }
  return kOk;
}

}  // namespace hybridgn::cli
