#include "cavkin/steady.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cavkin/special_functions.hpp"

namespace cavkin {
namespace {

constexpr double kTolerance = 1e-13;

double g_residual(double r, double theta) { return theta - q_function(2.0 * r * theta); }

double bisect_root(double r) {
  double lo = 1e-9, hi = 1.0 - 1e-9;
  if (g_residual(r, lo) >= 0.0) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g_residual(r, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool is_stable(double r, double theta) {
  return 2.0 * r * special::bessel_ratio_derivative(2.0 * r * theta) < 1.0;
}

}  // namespace

double q_function(double z) { return special::bessel_ratio(z); }

FixedPointResult solve_fixed_point(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("pump ratio must be >= 0");
  FixedPointResult out;
  if (r <= 1.0) {
    out.roots = {0.0};
    out.stable = {is_stable(r, 0.0) || r == 1.0};
    return out;
  }

  double theta = 0.9;
  bool converged = false;
  for (int it = 0; it < 20000; ++it) {
    const double next = q_function(2.0 * r * theta);
    if (std::abs(next - theta) < kTolerance) {
      theta = next;
      converged = true;
      break;
    }
    theta = 0.5 * theta + 0.5 * next;
  }
  if (!converged || !(theta > 0.0)) {
    theta = bisect_root(r);
  } else {
    // near threshold the map contracts slowly, so the iterate can sit well
    // away from the root even with a tiny step; polish by bisection
    double lo = std::max(1e-300, theta - 1e-6), hi = std::min(1.0, theta + 1e-6);
    if (g_residual(r, lo) < 0.0 && g_residual(r, hi) > 0.0) {
      for (int it = 0; it < 100 && hi - lo > 2e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_residual(r, mid) < 0.0 ? lo : hi) = mid;
      }
      theta = 0.5 * (lo + hi);
    } else {
      theta = bisect_root(r);
    }
  }

  out.theta_bar = theta;
  out.residual = std::abs(g_residual(r, theta));
  out.branch_count = theta > 0.0 ? 3 : 1;
  if (out.branch_count == 3) {
    out.roots = {-theta, 0.0, theta};
    out.stable = {is_stable(r, theta), is_stable(r, 0.0), is_stable(r, theta)};
  } else {
    out.roots = {0.0};
    out.stable = {true};
  }
  return out;
}

double asymptotic_theta(double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("asymptotic_theta needs r >= 1");
  return std::sqrt(2.0 * (r - 1.0));
}

PhaseSpaceField stationary_field(double r, double beta, double mass, const PhaseSpaceGrid& grid) {
  if (!(beta > 0.0 && mass > 0.0)) throw std::invalid_argument("stationary_field needs beta, m > 0");
  const double lost = std::erfc(grid.p_max * std::sqrt(beta / (2.0 * mass)));
  if (lost > 1e-8) {
    throw std::invalid_argument("momentum window too narrow: Gaussian mass outside is " +
                                std::to_string(lost));
  }
  const double z = 2.0 * r * solve_fixed_point(r).theta_bar;
  PhaseSpaceField f(grid);
  std::vector<double> wx(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) wx[i] = std::exp(z * (std::cos(grid.x(i)) - 1.0));
  for (std::size_t j = 0; j < grid.np; ++j) {
    const double p = grid.p(j);
    const double wp = std::exp(-beta * p * p / (2.0 * mass));
    for (std::size_t i = 0; i < grid.nx; ++i) f.at(i, j) = wx[i] * wp;
  }
  f.normalize();
  return f;
}

std::array<double, 4> von_mises_cos_moments(double z) {
  const double s0 = special::bessel_i_scaled(0, z);
  double ratio[5];
  for (int n = 1; n <= 4; ++n) ratio[n] = special::bessel_i_scaled(n, z) / s0;
  return {ratio[1], 0.5 * (1.0 + ratio[2]), (3.0 * ratio[1] + ratio[3]) / 4.0,
          (3.0 + 4.0 * ratio[2] + ratio[4]) / 8.0};
}

CosMoments cos_moments(double r) {
  const double z = 2.0 * r * solve_fixed_point(r).theta_bar;
  CosMoments m;
  m.bessel = von_mises_cos_moments(z);

  // the weight is even in x, so [0, pi] suffices
  using boost::math::quadrature::gauss_kronrod;
  auto weighted = [z](int n) {
    return gauss_kronrod<double, 61>::integrate(
        [z, n](double x) { return std::exp(z * (std::cos(x) - 1.0)) * std::pow(std::cos(x), n); }, 0.0,
        std::numbers::pi, 20, 1e-15);
  };
  const double norm = weighted(0);
  for (int n = 1; n <= 4; ++n) m.quadrature[n - 1] = weighted(n) / norm;
  return m;
}

BunchingResult bunching(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("pump ratio must be >= 0");
  BunchingResult b;
  b.closed_form = r <= 1.0 ? 0.5 : 1.0 - 1.0 / (2.0 * r);
  b.quadrature = cos_moments(r).quadrature[1];
  return b;
}

double finite_n_exponent(double x, double Y, double Z, double theta, int n_particles) {
  if (!(Z > -1.0)) throw std::invalid_argument("finite_n_exponent needs Z > -1");
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double w = Z / (1.0 + Z);
  double odd;
  if (w >= 0.0) {
    const double sw = std::sqrt(w);
    odd = sw * std::atanh(sw * c);
  } else {
    const double sw = std::sqrt(-w);
    odd = -sw * std::atan(sw * c);
  }
  return (0.5 * Y - 1.0) * std::log1p(Z * s * s) - (n_particles - 1) * Y * theta * odd;
}

double finite_n_exponent(double x, const DerivedCoefficients& c, double theta) {
  const double scale = std::abs(c.F0) + std::abs(c.Gamma0) + c.D0;
  if (std::abs(c.eta0) <= 1e-15 * scale) {
    const double b = c.beta * c.F0 * c.S2;
    const double s = std::sin(x);
    return 0.5 * b * s * s - (c.n_particles - 1) * b * theta * std::cos(x);
  }
  const double Y = c.F0 / (kWaveNumber * c.eta0);
  const double Z = c.beta * c.eta0 * c.S2;
  return finite_n_exponent(x, Y, Z, theta, c.n_particles);
}

double finite_n_fixed_point(const DerivedCoefficients& c) {
  using boost::math::quadrature::gauss_kronrod;
  double theta = 0.9;
  for (int it = 0; it < 5000; ++it) {
    const double shift = std::max({finite_n_exponent(0.0, c, theta), finite_n_exponent(0.5 * std::numbers::pi, c, theta),
                                   finite_n_exponent(std::numbers::pi, c, theta)});
    auto w = [&](double x) { return std::exp(finite_n_exponent(x, c, theta) - shift); };
    const double z = gauss_kronrod<double, 61>::integrate(w, 0.0, std::numbers::pi, 15, 1e-14);
    const double m = gauss_kronrod<double, 61>::integrate([&](double x) { return w(x) * std::cos(x); }, 0.0,
                                                          std::numbers::pi, 15, 1e-14);
    const double next = m / z;
    if (std::abs(next - theta) < 1e-13) return next;
    theta = 0.5 * (theta + next);
  }
  throw std::runtime_error("finite_n_fixed_point did not converge");
}

}  // namespace cavkin
