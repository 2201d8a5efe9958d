#pragma once

// Special functions used by the coverage and rate integrals.

#include <cmath>
#include <limits>

namespace rismm::special {

/// e^y E_1(y) for y > 0, finite for all y (E_1 is the exponential integral).
inline double scaled_e1(double y) {
  if (!(y > 0.0)) return std::numeric_limits<double>::infinity();
  if (y < 1.0) return -std::exp(y) * std::expint(-y);
  // Continued fraction, modified Lentz.
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double b = y + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

/// Density of Z = U V with U, V i.i.d. Exp(1): 2 K_0(2 sqrt z).
inline double exp_product_pdf(double z) {
  if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
  const double arg = 2.0 * std::sqrt(z);
  if (arg > 700.0) return 0.0;
  return 2.0 * std::cyl_bessel_k(0.0, arg);
}

/// P(U V > z) with U, V i.i.d. Exp(1): 2 sqrt(z) K_1(2 sqrt z).
inline double exp_product_sf(double z) {
  if (!(z > 0.0)) return 1.0;
  const double arg = 2.0 * std::sqrt(z);
  if (arg > 700.0) return 0.0;
  return arg * std::cyl_bessel_k(1.0, arg);
}

/// \int_0^r rho e^{-k rho} d rho, stable as k r -> 0.
inline double exp_radial_moment(double r, double k) {
  if (r <= 0.0) return 0.0;
  const double u = k * r;
  if (u < 0.5) {
    // r^2 sum_n (-u)^n / (n! (n + 2))
    double term = 1.0;
    double sum = 0.5;
    for (int n = 1; n < 40; ++n) {
      term *= -u / n;
      const double add = term / (n + 2);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return r * r * sum;
  }
  return (-std::expm1(-u) - u * std::exp(-u)) / (k * k);
}

}  // namespace rismm::special
