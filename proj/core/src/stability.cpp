#include "cavkin/stability.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cavkin/special_functions.hpp"

namespace cavkin {
namespace {

constexpr double kStart = 5.0;
constexpr double kBound = 1e3;
constexpr double kCriticalTol = 1e-12;

template <class F>
double refine(F&& f, double lo, double hi, double flo, double fhi) {
  // shrink until both ends are finite, then bracketed TOMS 748
  for (int it = 0; it < 200 && !(std::isfinite(flo) && std::isfinite(fhi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

StabilityResult classify(StabilityResult s, double scale) {
  if (std::abs(s.gamma) <= kCriticalTol * scale) {
    s.regime = Regime::Critical;
  } else {
    s.regime = s.gamma > 0.0 ? Regime::Unstable : Regime::Stable;
  }
  return s;
}

}  // namespace

DispersionParams DispersionParams::from(const DerivedCoefficients& c, double beta0) {
  return DispersionParams{c.n_bar, beta0, c.beta, c.delta_c, c.mass};
}

double dispersion_residual(double gamma, const DispersionParams& p) {
  const double b = std::sqrt(p.beta0 / (2.0 * p.mass)) * p.mass * gamma / kWaveNumber;
  const double bracket = b == 0.0 ? 1.0 : 1.0 - std::sqrt(std::numbers::pi) * b * special::erfcx(b);
  return 1.0 + (kHbar * p.delta_c + 0.5 * kHbar * kKappa * kHbar * gamma * p.beta) * p.n_bar * p.beta0 * bracket;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Stable:
      return "stable";
    case Regime::Critical:
      return "critical";
    case Regime::Unstable:
      return "unstable";
  }
  return "?";
}

StabilityResult growth_rate(const DispersionParams& p) {
  auto f = [&p](double g) { return dispersion_residual(g, p); };
  StabilityResult out;
  const double f0 = f(0.0);
  if (f0 == 0.0) {
    out.regime = Regime::Critical;
    return out;
  }
  const double dir = f0 < 0.0 ? 1.0 : -1.0;
  double near = 0.0, fnear = f0;
  double far = dir * kStart, ffar = f(far);
  while (std::signbit(ffar) == std::signbit(f0)) {
    if (std::abs(far) >= kBound) {
      out.bracketed = false;
      out.gamma = far;
      out.lo = std::min(near, far);
      out.hi = std::max(near, far);
      out.residual_at_root = ffar;
      out.regime = dir > 0.0 ? Regime::Unstable : Regime::Stable;
      return out;
    }
    near = far;
    fnear = ffar;
    far *= 2.0;
    ffar = f(far);
  }
  double lo = near, hi = far, flo = fnear, fhi = ffar;
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  out.gamma = refine(f, lo, hi, flo, fhi);
  out.lo = lo;
  out.hi = hi;
  out.residual_at_root = f(out.gamma);
  return classify(out, 1.0);
}

double chi_parameter(const DispersionParams& p) { return kHbar * std::abs(p.delta_c) * p.n_bar * p.beta0; }

double growth_rate_approx(double chi, double beta0, double beta, double delta_c, double omega_r) {
  constexpr double pp = 27.0 / 227.0;
  if (!(chi > 0.0) || chi * pp >= 1.0) throw std::invalid_argument("growth_rate_approx needs 0 < chi < 1/p");
  if (!(beta0 > 0.0) || delta_c == 0.0) throw std::invalid_argument("growth_rate_approx needs beta0 > 0, delta_c != 0");
  const double w0 = std::sqrt(2.0 * omega_r / (kHbar * beta0));
  const double one = 1.0 - pp * chi;
  const double num = std::log(chi / 1.135) - std::log(one);
  const double den = 1.4 * one + kHbar * kKappa * beta * w0 / (2.0 * std::abs(delta_c));
  return w0 * one * num / den;
}

double general_dispersion_residual(double gamma, const DispersionParams& p,
                                   const std::function<double(double)>& df0dp) {
  if (!(gamma > 0.0)) throw std::invalid_argument("general dispersion residual needs gamma > 0");
  const double k = kWaveNumber;
  auto integrand = [&](double q) {
    const double u = q * k / p.mass;
    return (k * k * q / p.mass) / (u * u + gamma * gamma) * df0dp(q);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  // split at zero, where the kernel varies on the scale m gamma / k
  const double I = gauss_kronrod<double, 31>::integrate(integrand, -inf, 0.0, 25, 1e-13) +
                   gauss_kronrod<double, 31>::integrate(integrand, 0.0, inf, 25, 1e-13);
  return 1.0 - (kHbar * p.delta_c + 0.5 * kHbar * kKappa * gamma * p.beta * kHbar) * p.n_bar * I;
}

StabilityResult growth_rate_general(const DispersionParams& p, const std::function<double(double)>& df0dp) {
  auto f = [&](double g) { return general_dispersion_residual(g, p, df0dp); };
  StabilityResult out;
  double lo = 1e-6, flo = f(lo);
  if (flo >= 0.0) {
    out.bracketed = false;
    out.regime = Regime::Stable;
    out.residual_at_root = flo;
    return out;
  }
  double hi = kStart, fhi = f(hi);
  while (fhi < 0.0) {
    if (hi >= kBound) {
      out.bracketed = false;
      out.gamma = hi;
      out.regime = Regime::Unstable;
      return out;
    }
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  out.gamma = refine(f, lo, hi, flo, fhi);
  out.lo = lo;
  out.hi = hi;
  out.residual_at_root = f(out.gamma);
  return classify(out, 1.0);
}

}  // namespace cavkin
