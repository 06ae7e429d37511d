#pragma once

// JSON configuration ingestion and CSV/JSON result formatting. This is the
// only place where engineering units (km, dB, GBd, ps^2/km) are accepted.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hybridgn/gn_engine.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn::io {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<FiberSegment> segments;
  SystemConfig system;
  QuadratureSettings quadrature;
  GnVariant variant = Coherent{};
  QMapping q_mapping;
  std::string output_format = "csv";
  std::string output_path = "-";

  [[nodiscard]] SpanPlan span() const { return SpanPlan(segments); }
};

namespace detail {

using nlohmann::json;

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string child(const std::string& ptr, std::string_view key) { return ptr + "/" + std::string(key); }

inline const json& require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr + ": expected an object");
  return j;
}

inline void reject_unknown(const json& j, const std::string& ptr, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(child(ptr, key) + ": unknown key");
  }
}

inline double number(const json& j, std::string_view key, const std::string& ptr) {
  if (!j.contains(key)) throw ConfigError(child(ptr, key) + ": required field missing");
  const auto& v = j.at(std::string(key));
  if (!v.is_number()) throw ConfigError(child(ptr, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(child(ptr, key) + ": expected a finite number");
  return x;
}

inline double number_or(const json& j, std::string_view key, const std::string& ptr, double fallback) {
  return j.contains(key) ? number(j, key, ptr) : fallback;
}

inline int integer(const json& j, std::string_view key, const std::string& ptr) {
  if (!j.contains(key)) throw ConfigError(child(ptr, key) + ": required field missing");
  const auto& v = j.at(std::string(key));
  if (!v.is_number_integer()) throw ConfigError(child(ptr, key) + ": expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < INT32_MIN || x > INT32_MAX) throw ConfigError(child(ptr, key) + ": integer out of range");
  return static_cast<int>(x);
}

inline bool boolean(const json& j, std::string_view key, const std::string& ptr) {
  const auto& v = j.at(std::string(key));
  if (!v.is_boolean()) throw ConfigError(child(ptr, key) + ": expected true or false");
  return v.get<bool>();
}

inline std::string string(const json& j, std::string_view key, const std::string& ptr) {
  const auto& v = j.at(std::string(key));
  if (!v.is_string()) throw ConfigError(child(ptr, key) + ": expected a string");
  return v.get<std::string>();
}

// Runs a validator and tags its message with the JSON pointer of the object.
template <class F>
void checked(const std::string& ptr, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(ptr + ": " + e.what());
  }
}

inline SystemConfig parse_system(const json& j) {
  const std::string ptr = "/system";
  require_object(j, ptr);
  reject_unknown(j, ptr,
                 {"spans", "symbol_rate_gbd", "channels", "noise_figure_db", "wavelength_nm", "resolution_bw_ghz",
                  "mpi_coeff_per_w", "mpi_compensation"});
  SystemConfig s;
  s.span_count = integer(j, "spans", ptr);
  s.symbol_rate = convert::ghz(number(j, "symbol_rate_gbd", ptr));
  s.channel_count = integer(j, "channels", ptr);
  s.noise_figure = convert::db_to_linear(number(j, "noise_figure_db", ptr));
  s.carrier_wavelength = convert::nm(number_or(j, "wavelength_nm", ptr, 1550.0));
  if (j.contains("resolution_bw_ghz")) s.resolution_bw = convert::ghz(number(j, "resolution_bw_ghz", ptr));
  s.mpi_coeff = number_or(j, "mpi_coeff_per_w", ptr, 0.0);
  s.mpi_compensation = number_or(j, "mpi_compensation", ptr, 0.0);
  checked(ptr, [&] { s.validate(); });
  return s;
}

inline FiberSegment parse_segment(const json& j, const std::string& ptr, Meters wavelength) {
  require_object(j, ptr);
  reject_unknown(j, ptr,
                 {"name", "length_km", "attenuation_db_per_km", "beta2_ps2_per_km", "gamma_per_w_km", "a_eff_um2",
                  "n2_m2_per_w"});
  FiberSegment s;
  if (j.contains("name")) s.name = string(j, "name", ptr);
  s.length = convert::km(number(j, "length_km", ptr));
  checked(child(ptr, "attenuation_db_per_km"),
          [&] { s.attenuation = attenuation_db_per_km_to_np_per_m(number(j, "attenuation_db_per_km", ptr)); });
  s.gvd = convert::ps2_per_km(number(j, "beta2_ps2_per_km", ptr));
  const bool direct = j.contains("gamma_per_w_km");
  const bool from_area = j.contains("a_eff_um2") || j.contains("n2_m2_per_w");
  if (direct == from_area)
    throw ConfigError(ptr + ": give either gamma_per_w_km or both a_eff_um2 and n2_m2_per_w");
  if (direct) {
    s.nonlinear_coeff = convert::per_w_km(number(j, "gamma_per_w_km", ptr));
  } else {
    s.a_eff = convert::um2(number(j, "a_eff_um2", ptr));
    s.n2 = NonlinearIndex(number(j, "n2_m2_per_w", ptr));
    checked(ptr, [&] { s.nonlinear_coeff = gamma_from_aeff(*s.n2, wavelength, *s.a_eff); });
  }
  checked(ptr, [&] { s.validate(); });
  return s;
}

inline QuadratureSettings parse_quadrature(const json& j) {
  const std::string ptr = "/quadrature";
  require_object(j, ptr);
  reject_unknown(j, ptr,
                 {"delta_safety", "nodes_per_oscillation", "target_rel_truncation", "truncation_enabled",
                  "pole_window", "threads"});
  QuadratureSettings q;
  q.delta_safety = number_or(j, "delta_safety", ptr, q.delta_safety);
  if (j.contains("nodes_per_oscillation")) q.nodes_per_oscillation = integer(j, "nodes_per_oscillation", ptr);
  q.target_rel_truncation = number_or(j, "target_rel_truncation", ptr, q.target_rel_truncation);
  if (j.contains("truncation_enabled")) q.truncation_enabled = boolean(j, "truncation_enabled", ptr);
  q.pole_window = number_or(j, "pole_window", ptr, q.pole_window);
  if (j.contains("threads")) {
    const int t = integer(j, "threads", ptr);
    if (t < 1) throw ConfigError(ptr + "/threads: must be >= 1");
    q.workers = static_cast<unsigned>(t);
  }
  checked(ptr, [&] { q.validate(); });
  return q;
}

inline GnVariant parse_variant(const json& j) {
  const std::string ptr = "/variant";
  require_object(j, ptr);
  reject_unknown(j, ptr, {"model", "epsilon"});
  const std::string model = j.contains("model") ? string(j, "model", ptr) : "coherent";
  if (model == "coherent") {
    if (j.contains("epsilon")) throw ConfigError(ptr + "/epsilon: only valid with model span_scaled");
    return Coherent{};
  }
  if (model == "span_scaled") {
    const double eps = number_or(j, "epsilon", ptr, 0.0);
    if (!(eps >= 0.0)) throw ConfigError(ptr + "/epsilon: must be >= 0");
    return SpanScaled{eps};
  }
  throw ConfigError(ptr + "/model: expected \"coherent\" or \"span_scaled\"");
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError("malformed JSON at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + what);
  }
  detail::require_object(root, "");
  detail::reject_unknown(root, "", {"span", "system", "quadrature", "variant", "output", "q_mapping"});

  RunConfig cfg;
  if (!root.contains("system")) throw ConfigError("/system: required section missing");
  cfg.system = detail::parse_system(root.at("system"));

  if (!root.contains("span")) throw ConfigError("/span: required section missing");
  const auto& span = root.at("span");
  if (!span.is_array() || span.empty()) throw ConfigError("/span: expected a nonempty array of segments");
  for (std::size_t i = 0; i < span.size(); ++i)
    cfg.segments.push_back(detail::parse_segment(span[i], "/span/" + std::to_string(i), cfg.system.carrier_wavelength));

  if (root.contains("quadrature")) cfg.quadrature = detail::parse_quadrature(root.at("quadrature"));
  if (root.contains("variant")) cfg.variant = detail::parse_variant(root.at("variant"));

  if (root.contains("output")) {
    const auto& o = detail::require_object(root.at("output"), "/output");
    detail::reject_unknown(o, "/output", {"format", "path"});
    if (o.contains("format")) cfg.output_format = detail::string(o, "format", "/output");
    if (o.contains("path")) cfg.output_path = detail::string(o, "path", "/output");
    if (cfg.output_format != "csv" && cfg.output_format != "json")
      throw ConfigError("/output/format: expected \"csv\" or \"json\"");
  }
  if (root.contains("q_mapping")) {
    const auto& q = detail::require_object(root.at("q_mapping"), "/q_mapping");
    detail::reject_unknown(q, "/q_mapping", {"ber_prefactor", "snr_divisor"});
    cfg.q_mapping.ber_prefactor = detail::number_or(q, "ber_prefactor", "/q_mapping", cfg.q_mapping.ber_prefactor);
    cfg.q_mapping.snr_divisor = detail::number_or(q, "snr_divisor", "/q_mapping", cfg.q_mapping.snr_divisor);
    detail::checked("/q_mapping", [&] { cfg.q_mapping.validate(); });
  }
  detail::checked("/span", [&] { (void)derive_span(cfg.span(), cfg.system); });
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return x;
}

using Cell = std::variant<double, long long, std::string>;

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_number(*d) : json_string(format_number(*d));
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return json_string(std::get<std::string>(c));
}

using Record = std::vector<std::pair<std::string, Cell>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Record meta;        // written as leading comments in CSV
  std::string footer; // trailing comment line in CSV
};

inline std::string record_csv(const Record& r) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : r) out += k + "," + cell_text(v) + "\n";
  return out;
}

inline std::string record_json(const Record& r) {
  std::string out = "{\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += "  " + json_string(r[i].first) + ": " + cell_json(r[i].second);
    out += (i + 1 < r.size()) ? ",\n" : "\n";
  }
  return out + "}\n";
}

inline std::string table_csv(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + cell_text(v) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  if (!t.footer.empty()) out += "# " + t.footer + "\n";
  return out;
}

inline std::string table_json(const Table& t) {
  std::string out = "{\n  \"meta\": {";
  for (std::size_t i = 0; i < t.meta.size(); ++i)
    out += (i ? ", " : "") + json_string(t.meta[i].first) + ": " + cell_json(t.meta[i].second);
  out += "},\n  \"rows\": [\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += "    {";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out += (i ? ", " : "") + json_string(t.columns[i]) + ": " + cell_json(t.rows[r][i]);
    out += (r + 1 < t.rows.size()) ? "},\n" : "}\n";
  }
  out += "  ]";
  if (!t.footer.empty()) out += ",\n  \"note\": " + json_string(t.footer);
  return out + "\n}\n";
}

struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Reads comma-separated text, skipping blank lines and lines starting with '#'.
inline CsvData read_csv(std::string_view text) {
  CsvData out;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      out.columns = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != out.columns.size()) throw std::invalid_argument("CSV row has the wrong number of cells");
      out.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::invalid_argument("CSV has no header");
  return out;
}

// Column layouts of the sweep outputs.
inline const std::vector<std::string> kPowerSweepColumns{"p_dbm", "osnr_db", "q_db"};
inline const std::vector<std::string> kSplitSweepColumns{"segment1_km", "split_ratio", "gamma_per_w2", "ase_w",
                                                         "mpi",         "p_opt_dbm",   "osnr_opt_db",  "q_opt_db",
                                                         "optimum"};
inline const std::vector<std::string> kBoundColumns{"m", "mu", "tight", "loose"};

/// Checks a parsed CSV against a column layout: header match and every cell numeric.
inline void validate_csv(const CsvData& data, const std::vector<std::string>& columns) {
  if (data.columns != columns) throw std::invalid_argument("CSV header does not match the expected columns");
  for (const auto& row : data.rows)
    for (const auto& cell : row) (void)parse_number(cell);
}

}  // namespace hybridgn::io
