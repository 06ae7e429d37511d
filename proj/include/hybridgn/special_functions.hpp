#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hybridgn {

/// Si(x) = int_0^x sin(t)/t dt, absolute error below 1e-14 on the real line.
///
/// Power series up to |x| = 4. Beyond that the auxiliary functions f, g in
/// Si(x) = pi/2 - f(x) cos x - g(x) sin x are taken from the continued
/// fraction of E1(ix), evaluated with the modified Lentz algorithm.
inline double sine_integral(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::numbers::pi / 2.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x <= 4.0) {
    // sum_n (-1)^n x^{2n+1} / ((2n+1) (2n+1)!)
    const double x2 = x * x;
    double term = x;  // x^{2n+1} / (2n+1)!, signed
    double sum = x;
    for (int n = 1; n < 64; ++n) {
      term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return sum;
  }

  using C = std::complex<double>;
  constexpr double tiny = 1e-300;
  C b(1.0, x);
  C c(1.0 / tiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  h *= C(std::cos(x), -std::sin(x));
  return std::numbers::pi / 2.0 + h.imag();
}

}  // namespace hybridgn
