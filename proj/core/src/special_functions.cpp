#include "cavkin/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

namespace cavkin::special {
namespace {

// Beyond this |x| the Hankel expansion is accurate to machine precision.
constexpr double kAsymptoticThreshold = 25.0;

// I_n(x) exp(-x) for large positive x via the Hankel series in mu = 4 n^2.
double bessel_i_asymptotic_scaled(int n, double x) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i_scaled(int n, double x) {
  if (n < 0) n = -n;
  const double ax = std::abs(x);
  double value;
  if (ax < kAsymptoticThreshold) {
    value = boost::math::cyl_bessel_i(n, ax) * std::exp(-ax);
  } else {
    value = bessel_i_asymptotic_scaled(n, ax);
  }
  return (x < 0.0 && (n % 2) == 1) ? -value : value;
}

double bessel_i(int n, double x) {
  if (n < 0) n = -n;
  const double ax = std::abs(x);
  if (ax < kAsymptoticThreshold) {
    const double value = boost::math::cyl_bessel_i(n, ax);
    return (x < 0.0 && (n % 2) == 1) ? -value : value;
  }
  return bessel_i_scaled(n, x) * std::exp(ax);
}

double log_bessel_i0(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) {
    // log1p of the series tail keeps relative accuracy as x -> 0
    const double q = 0.25 * ax * ax;
    double term = 1.0, tail = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= q / (static_cast<double>(k) * k);
      tail += term;
      if (term < tail * 1e-17) break;
    }
    return std::log1p(tail);
  }
  if (ax < kAsymptoticThreshold) return std::log(boost::math::cyl_bessel_i(0, ax));
  return ax + std::log(bessel_i_asymptotic_scaled(0, ax));
}

double bessel_ratio(double x) {
  if (x == 0.0) return 0.0;
  return bessel_i_scaled(1, x) / bessel_i_scaled(0, x);
}

double bessel_ratio_derivative(double x) {
  if (std::abs(x) < 1e-8) return 0.5;
  const double q = bessel_ratio(x);
  return 1.0 - q / x - q * q;
}

double erfcx(double x) {
  if (x < 0.0) {
    // erfcx(-y) = 2 exp(y^2) - erfcx(y)
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < kAsymptoticThreshold) {
    return std::exp(x * x) * std::erfc(x);
  }
  // 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double next = -term * (2.0 * k - 1.0) * inv2x2;
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return sum / (x * std::sqrt(std::numbers::pi));
}

double gamma_ratio_3_4_over_1_4() { return std::tgamma(0.75) / std::tgamma(0.25); }

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_k: modulus outside [0, 1)");
  return std::comp_ellint_1(k);
}

}  // namespace cavkin::special
