#pragma once

#include <string>
#include <vector>

#include "hybridgn/hybridgn.hpp"

namespace testing_support {

using namespace hybridgn;

inline FiberSegment fiber(const std::string& name, double km, double db_per_km, double beta2_ps2_km,
                          double gamma_per_w_km) {
  FiberSegment s;
  s.name = name;
  s.length = convert::km(km);
  s.attenuation = attenuation_db_per_km_to_np_per_m(db_per_km);
  s.gvd = convert::ps2_per_km(beta2_ps2_km);
  s.nonlinear_coeff = convert::per_w_km(gamma_per_w_km);
  return s;
}

// Reference fibers with n2 = 2.6e-20 m^2/W at 1550 nm.
inline constexpr double kGammaQsmf = 0.42158146577204967329;
inline constexpr double kGammaSmf = 0.94103005752689659217;

inline FiberSegment qsmf(double km) { return fiber("QSMF", km, 0.16, -26.6, kGammaQsmf); }
inline FiberSegment smf(double km) { return fiber("SMF", km, 0.158, -26.6, kGammaSmf); }

inline SpanPlan hybrid_span() { return SpanPlan({qsmf(50), smf(50)}); }
inline SpanPlan smf_span() { return SpanPlan({smf(100)}); }

inline SystemConfig long_haul_system(int spans = 60) {
  SystemConfig s;
  s.span_count = spans;
  s.symbol_rate = convert::ghz(32);
  s.channel_count = 9;
  s.noise_figure = convert::db_to_linear(5.0);
  s.mpi_compensation = 1.0;
  return s;
}

inline SystemConfig toy_system() {
  SystemConfig s = long_haul_system(2);
  s.channel_count = 3;
  s.symbol_rate = convert::ghz(1);
  return s;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string config_path(const std::string& name) { return std::string(HYBRIDGN_CONFIG_DIR) + "/" + name; }

}  // namespace testing_support
