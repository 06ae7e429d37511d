#pragma once

// Compile-time dimensional analysis over three base dimensions: length (m),
// time (s) and optical power (W). Everything past the ingestion boundary is SI.

#include <cmath>
#include <compare>
#include <numbers>

namespace hybridgn {

template <int L, int T, int P>
class Quantity {
 public:
  static constexpr int length_dim = L;
  static constexpr int time_dim = T;
  static constexpr int power_dim = P;

  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : v_(v) {}

  [[nodiscard]] constexpr double value() const { return v_; }

  constexpr Quantity operator-() const { return Quantity(-v_); }
  constexpr Quantity& operator+=(Quantity o) {
    v_ += o.v_;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity o) {
    v_ -= o.v_;
    return *this;
  }
  constexpr Quantity& operator*=(double s) {
    v_ *= s;
    return *this;
  }

  friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.v_ + b.v_); }
  friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.v_ - b.v_); }
  friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.v_ * s); }
  friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.v_ * s); }
  friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.v_ / s); }
  friend constexpr auto operator<=>(Quantity, Quantity) = default;

 private:
  double v_ = 0.0;
};

// Dimensionless results collapse to plain double.
template <int L, int T, int P>
constexpr auto collapse(double v) {
  if constexpr (L == 0 && T == 0 && P == 0) {
    return v;
  } else {
    return Quantity<L, T, P>(v);
  }
}

template <int L1, int T1, int P1, int L2, int T2, int P2>
constexpr auto operator*(Quantity<L1, T1, P1> a, Quantity<L2, T2, P2> b) {
  return collapse<L1 + L2, T1 + T2, P1 + P2>(a.value() * b.value());
}

template <int L1, int T1, int P1, int L2, int T2, int P2>
constexpr auto operator/(Quantity<L1, T1, P1> a, Quantity<L2, T2, P2> b) {
  return collapse<L1 - L2, T1 - T2, P1 - P2>(a.value() / b.value());
}

template <int L, int T, int P>
constexpr auto operator/(double s, Quantity<L, T, P> a) {
  return Quantity<-L, -T, -P>(s / a.value());
}

template <int L, int T, int P>
Quantity<L, T, P> abs(Quantity<L, T, P> q) {
  return Quantity<L, T, P>(std::abs(q.value()));
}

using Meters = Quantity<1, 0, 0>;
using SquareMeters = Quantity<2, 0, 0>;
using Seconds = Quantity<0, 1, 0>;
using Hertz = Quantity<0, -1, 0>;
using Watts = Quantity<0, 0, 1>;
using Joules = Quantity<0, 1, 1>;
using JouleSeconds = Quantity<0, 2, 1>;
using MetersPerSecond = Quantity<1, -1, 0>;
using PerMeter = Quantity<-1, 0, 0>;          // attenuation, Np/m (power)
using GvdCoeff = Quantity<-1, 2, 0>;          // beta2, s^2/m
using NonlinearCoeff = Quantity<-1, 0, -1>;   // gamma, 1/(W m)
using NonlinearIndex = Quantity<2, 0, -1>;    // n2, m^2/W
using PerWatt = Quantity<0, 0, -1>;
using PerWattSquared = Quantity<0, 0, -2>;

namespace constants {
inline constexpr JouleSeconds planck{6.62607015e-34};
inline constexpr MetersPerSecond speed_of_light{299792458.0};
}  // namespace constants

// Ingestion-boundary conversions. Nothing inside the library calls these on
// its own values.
namespace convert {

inline constexpr Meters km(double v) { return Meters(v * 1e3); }
inline constexpr Meters nm(double v) { return Meters(v * 1e-9); }
inline constexpr SquareMeters um2(double v) { return SquareMeters(v * 1e-12); }
inline constexpr GvdCoeff ps2_per_km(double v) { return GvdCoeff(v * 1e-24 / 1e3); }
inline constexpr NonlinearCoeff per_w_km(double v) { return NonlinearCoeff(v / 1e3); }
inline constexpr Hertz ghz(double v) { return Hertz(v * 1e9); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline Watts dbm_to_watts(double dbm) { return Watts(1e-3 * db_to_linear(dbm)); }
inline double watts_to_dbm(Watts p) { return linear_to_db(p.value() / 1e-3); }

}  // namespace convert

}  // namespace hybridgn
