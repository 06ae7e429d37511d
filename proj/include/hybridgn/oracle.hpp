#pragma once

// Brute-force double integrals over the first-quadrant square, used to check
// the single-integral path. Not for production use: cost grows as grid_n^2.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hybridgn/fwm_kernel.hpp"
#include "hybridgn/link_model.hpp"
#include "hybridgn/quadrature.hpp"
#include "hybridgn/summation.hpp"
#include "hybridgn/units.hpp"

namespace hybridgn {

/// 2-D composite Simpson of g(f1, f2) over [0, half_width]^2.
template <class G>
double square_simpson(G&& g, double half_width, int grid_n) {
  if (grid_n < 32 || grid_n % 2) throw std::invalid_argument("grid_n must be even and >= 32");
  const double h = half_width / grid_n;
  auto w = [grid_n](int i) { return (i == 0 || i == grid_n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  CompensatedSum acc;
  for (int i = 0; i <= grid_n; ++i) {
    for (int j = 0; j <= grid_n; ++j) acc.add(w(i) * w(j) * g(i * h, j * h));
  }
  return acc.get() * h * h / 9.0;
}

/// int int_{[0,B0/2]^2} xi(f1 f2 / (2 f_phi^2)) df1 df2, in Hz^2/W^2.
inline double brute_force_gamma_integral(const DerivedSpan& d, int grid_n, double pole_window = kPoleWindow) {
  const double two_fphi2 = 2.0 * d.f_phi.value() * d.f_phi.value();
  auto g = [&](double f1, double f2) { return xi(f1 * f2 / two_fphi2, d, pole_window).value(); };
  return square_simpson(g, d.bandwidth.value() / 2.0, grid_n);
}

/// Converts the quadrant double integral into gamma-tilde: kappa / (2 f_phi^2).
inline PerWattSquared gamma_from_double_integral(double quadrant_integral, const DerivedSpan& d) {
  return PerWattSquared(d.kappa * quadrant_integral / (2.0 * d.f_phi.value() * d.f_phi.value()));
}

/// Same integrand over the part of the square with f1 f2 <= 2 f_phi^2 mu,
/// iterated Simpson (inner limit follows the hyperbola). The outer range is
/// split at the hyperbola's corner where the inner limit stops being constant.
inline double brute_force_truncated_integral(const DerivedSpan& d, double mu, int grid_n,
                                             double pole_window = kPoleWindow) {
  if (grid_n < 32 || grid_n % 2) throw std::invalid_argument("grid_n must be even and >= 32");
  if (!(mu > 0.0)) throw std::domain_error("mu must be > 0");
  const double two_fphi2 = 2.0 * d.f_phi.value() * d.f_phi.value();
  const double half = d.bandwidth.value() / 2.0;
  const double c2 = two_fphi2 * mu;
  auto inner = [&](double f1) {
    const double top = f1 > 0.0 ? std::min(half, c2 / f1) : half;
    return simpson([&](double f2) { return xi(f1 * f2 / two_fphi2, d, pole_window).value(); }, 0.0, top, grid_n);
  };
  const double corner = std::min(half, c2 / half);
  double total = simpson(inner, 0.0, corner, grid_n);
  if (corner < half) total += simpson(inner, corner, half, grid_n);
  return total;
}

}  // namespace hybridgn
