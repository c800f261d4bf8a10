#include "cavkin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "cavkin/errors.hpp"
#include "cavkin/model.hpp"
#include "cavkin/special_functions.hpp"
#include "cavkin/steady.hpp"

namespace cavkin {

double theta_of(std::span<const double> positions) {
  if (positions.empty()) throw std::invalid_argument("theta_of needs at least one particle");
  double s = 0.0;
  for (double x : positions) s += std::cos(kWaveNumber * x);
  return s / static_cast<double>(positions.size());
}

namespace {

struct Exponent {
  double alpha;
  double n;
  double value(double y) const { return -n * (alpha * y * y - special::log_bessel_i0(2.0 * alpha * y)); }
  // y^2 - 2 y q(2 alpha y) = y^2 [(1 - 2 alpha) + 2 alpha (1 - 2 q(x) / x)], x = 2 alpha y;
  // the bracket cancels near alpha = 1/2
  double d_alpha(double y) const {
    const double x = 2.0 * alpha * y;
    return -n * y * y * ((1.0 - 2.0 * alpha) + 2.0 * alpha * one_minus_2q_over_x(x));
  }
  static double one_minus_2q_over_x(double x) {
    if (x > 2.0) return 1.0 - 2.0 * special::bessel_ratio(x) / x;
    // (x I0 - 2 I1) / (x I0) by series
    const double h = 0.25 * x * x;
    double num = 0.0, den = 1.0, term = 1.0;
    for (int k = 1; k < 40; ++k) {
      term *= h / (double(k) * k);
      num += term * k / (k + 1.0);
      den += term;
      if (term < 1e-18 * den) break;
    }
    return num / den;
  }
  double d2_alpha(double y) const {
    return 4.0 * n * y * y * special::bessel_ratio_derivative(2.0 * alpha * y);
  }
};

// y where E(y) - E(y*) crosses -depth, searching outward from y* in direction dir
double tail_edge(const Exponent& E, double ystar, double estar, double dir, double depth, double floor_y) {
  double h = std::max(std::pow(E.n, -0.25), 1e-6);
  double far = ystar + dir * h;
  while (true) {
    if (dir < 0.0 && far <= floor_y) return floor_y;
    if (E.value(far) - estar < -depth) break;
    h *= 2.0;
    far = ystar + dir * h;
  }
  double near = ystar;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (near + far);
    (E.value(mid) - estar < -depth ? far : near) = mid;
  }
  return far;
}

}  // namespace

OracleResult g_alpha_oracle(double alpha, int n_particles) {
  if (!(alpha >= 0.0) || n_particles < 2) throw std::invalid_argument("g_alpha_oracle needs alpha >= 0, N >= 2");
  const double N = n_particles;
  OracleResult out;
  if (alpha == 0.0) {
    // independent uniform particles
    out.theta2 = 1.0 / (2.0 * N);
    out.theta4 = (3.0 * N / 8.0 + 3.0 * N * (N - 1.0) / 4.0) / (N * N * N * N);
    out.ncav_over_nbar = N * out.theta2;
    out.g2 = out.theta4 / (out.theta2 * out.theta2);
    out.G = std::numeric_limits<double>::infinity();
    return out;
  }

  const Exponent E{alpha, N};
  const double ystar = alpha > 1.0 ? solve_fixed_point(alpha).theta_bar : 0.0;
  const double estar = E.value(ystar);
  constexpr double kDepth = 60.0;
  const double hi = tail_edge(E, ystar, estar, 1.0, kDepth, 0.0);
  const double lo = ystar > 0.0 ? tail_edge(E, ystar, estar, -1.0, kDepth, 0.0) : 0.0;

  using boost::math::quadrature::gauss_kronrod;
  double worst = 0.0;
  auto integrate = [&](auto&& g) {
    double err1 = 0.0, err2 = 0.0, l1 = 0.0;
    const double total_lo = ystar > lo ? gauss_kronrod<double, 61>::integrate(g, lo, ystar, 10, 1e-10, &err1, &l1) : 0.0;
    double l2 = 0.0;
    const double total_hi = gauss_kronrod<double, 61>::integrate(g, ystar, hi, 10, 1e-10, &err2, &l2);
    const double total = total_lo + total_hi;
    const double scale = std::max(l1 + l2, std::abs(total));
    if (scale > 0.0) worst = std::max(worst, (err1 + err2) / scale);
    return total;
  };

  const double J0 = integrate([&](double y) { return std::exp(E.value(y) - estar); });
  const double m1 = integrate([&](double y) { return E.d_alpha(y) * std::exp(E.value(y) - estar); }) / J0;
  const double c2 = integrate([&](double y) {
                      const double d = E.d_alpha(y) - m1;
                      return (E.d2_alpha(y) + d * d) * std::exp(E.value(y) - estar);
                    }) / J0;

  out.G = estar + std::log(2.0 * J0);
  out.dG = m1;
  out.d2G = c2;
  out.ncav_over_nbar = 1.0 / (2.0 * alpha) + m1;
  out.theta2 = out.ncav_over_nbar / N;
  const double var_n2 = -1.0 / (2.0 * alpha * alpha) + c2;  // N^2 (<T^4> - <T^2>^2)
  out.theta4 = out.theta2 * out.theta2 + var_n2 / (N * N);
  out.g2 = out.theta4 / (out.theta2 * out.theta2);
  out.error_estimate = worst;
  if (!(worst < 1e-8) || !std::isfinite(out.theta4)) {
    std::ostringstream os;
    os << "g_alpha_oracle(" << alpha << ", " << n_particles << "): quadrature error " << worst;
    throw NumericalError(os.str());
  }
  return out;
}

std::string to_string(PhotonRegime r) {
  switch (r) {
    case PhotonRegime::Below:
      return "below";
    case PhotonRegime::At:
      return "at";
    case PhotonRegime::Above:
      return "above";
  }
  return "?";
}

std::string to_string(PhotonMethod m) {
  switch (m) {
    case PhotonMethod::Quadrature:
      return "quadrature";
    case PhotonMethod::ClosedForm:
      return "closed_form";
    case PhotonMethod::Ensemble:
      return "ensemble";
    case PhotonMethod::Factorized:
      return "factorized";
  }
  return "?";
}

double g2_threshold_constant() {
  const double r = 1.0 / special::gamma_ratio_3_4_over_1_4();
  return 0.25 * r * r;
}

PhotonStats ncav_closed_forms(double alpha, int n_particles, double n_crit) {
  if (!(alpha >= 0.0) || n_particles < 1 || !(n_crit > 0.0)) {
    throw std::invalid_argument("ncav_closed_forms needs alpha >= 0, N >= 1, n_crit > 0");
  }
  PhotonStats s;
  s.method = PhotonMethod::ClosedForm;
  const double n_bar = alpha * n_crit;
  if (std::abs(alpha - 1.0) <= 1e-3) {
    s.regime = PhotonRegime::At;
    s.n_cav = 2.0 * std::sqrt(static_cast<double>(n_particles)) * n_crit * special::gamma_ratio_3_4_over_1_4();
    s.g2_zero = g2_threshold_constant();
    if (alpha != 1.0) s.note = "alpha within 1e-3 of threshold; threshold form used";
  } else if (alpha < 1.0) {
    s.regime = PhotonRegime::Below;
    s.n_cav = 0.5 * n_crit * n_crit / (n_crit - n_bar);
    s.g2_zero = 3.0;
  } else {
    s.regime = PhotonRegime::Above;
    s.n_cav = 2.0 * n_particles * (n_bar - n_crit);
    s.g2_zero = 1.0;
  }
  return s;
}

double ncav_below_leading(double alpha, double n_crit) {
  const double n_bar = alpha * n_crit;
  return n_bar * n_crit / (2.0 * (n_crit - n_bar));
}

PhotonStats ncav_oracle(double alpha, int n_particles, double n_crit) {
  const auto o = g_alpha_oracle(alpha, n_particles);
  PhotonStats s;
  s.method = PhotonMethod::Quadrature;
  s.regime = std::abs(alpha - 1.0) <= 1e-3 ? PhotonRegime::At : (alpha < 1.0 ? PhotonRegime::Below : PhotonRegime::Above);
  s.n_cav = n_particles * alpha * n_crit * o.theta2;
  s.g2_zero = o.g2;
  return s;
}

double g2_factorized(double r, int n_particles) {
  if (n_particles < 4) throw std::invalid_argument("g2_factorized needs N >= 4");
  const auto m = cos_moments(r).bessel;
  const double th = m[0], B = m[1], c3 = m[2], c4 = m[3];
  const double N = n_particles;
  const double N4 = N * N * N * N;
  const double t2 = B / N + (N - 1.0) / N * th * th;
  const double t4 = N * (N - 1) * (N - 2) * (N - 3) / N4 * th * th * th * th +
                    6.0 * N * (N - 1) * (N - 2) / N4 * th * th * B + 3.0 * N * (N - 1) / N4 * B * B +
                    4.0 * N * (N - 1) / N4 * th * c3 + N / N4 * c4;
  return t4 / (t2 * t2);
}

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanFree {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

}  // namespace

SpectrumResult autocorrelation(const std::vector<std::vector<double>>& traces, const SpectrumOptions& opts) {
  if (traces.empty()) throw std::invalid_argument("autocorrelation needs at least one trace");
  if (!(opts.dt > 0.0) || opts.max_lag < 1) throw std::invalid_argument("autocorrelation needs dt > 0, max_lag >= 1");
  const std::size_t L = opts.max_lag;
  for (const auto& tr : traces) {
    if (tr.size() < 4 * L) {
      std::ostringstream os;
      os << "series of " << tr.size() << " samples is shorter than 4 * max_lag = " << 4 * L;
      throw std::invalid_argument(os.str());
    }
  }

  SpectrumResult out;
  out.tau.resize(L + 1);
  out.c_tau.assign(L + 1, 0.0);
  for (std::size_t k = 0; k <= L; ++k) out.tau[k] = static_cast<double>(k) * opts.dt;
  for (const auto& tr : traces) {
    const std::size_t n = tr.size();
    for (std::size_t k = 0; k <= L; ++k) {
      double s = 0.0;
      for (std::size_t t = 0; t + k < n; ++t) s += tr[t] * tr[t + k];
      out.c_tau[k] += s / static_cast<double>(n - k);
    }
  }
  for (double& c : out.c_tau) c /= static_cast<double>(traces.size());

  const std::size_t M = opts.segment > 0 ? opts.segment : 2 * L;
  const std::size_t nc = M / 2 + 1;
  std::unique_ptr<double[], FftwFree> buf(fftw_alloc_real(M));
  std::unique_ptr<fftw_complex[], FftwFree> spec(fftw_alloc_complex(nc));
  std::unique_ptr<fftw_plan_s, PlanFree> plan(fftw_plan_dft_r2c_1d(static_cast<int>(M), buf.get(), spec.get(), FFTW_ESTIMATE));
  std::vector<double> window(M);
  double wsum2 = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(M));
    wsum2 += window[i] * window[i];
  }
  out.omega.resize(nc);
  out.s_omega.assign(nc, 0.0);
  for (std::size_t k = 0; k < nc; ++k) {
    out.omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(M) * opts.dt);
  }
  std::size_t segments = 0;
  const std::size_t hop = std::max<std::size_t>(1, M / 2);
  for (const auto& tr : traces) {
    for (std::size_t start = 0; start + M <= tr.size(); start += hop) {
      double mean = 0.0;
      if (opts.subtract_mean) {
        for (std::size_t i = 0; i < M; ++i) mean += tr[start + i];
        mean /= static_cast<double>(M);
      }
      for (std::size_t i = 0; i < M; ++i) buf[i] = (tr[start + i] - mean) * window[i];
      fftw_execute(plan.get());
      for (std::size_t k = 0; k < nc; ++k) {
        out.s_omega[k] += spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
      }
      ++segments;
    }
  }
  const double norm = opts.dt / (wsum2 * static_cast<double>(segments));
  for (double& s : out.s_omega) s *= norm;

  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t k = 1; k < nc; ++k) {
    if (out.omega[k] < opts.omega_min) continue;
    if (out.s_omega[k] > best_val) {
      best_val = out.s_omega[k];
      best = k;
    }
  }
  double peak = out.omega[best];
  if (best > 0 && best + 1 < nc) {
    const double a = out.s_omega[best - 1], b = out.s_omega[best], c = out.s_omega[best + 1];
    const double den = a - 2.0 * b + c;
    if (den < 0.0) {
      const double shift = 0.5 * (a - c) / den;
      peak += shift * (out.omega[1] - out.omega[0]);
    }
  }
  out.peak_omega = peak;
  return out;
}

PendulumPeak pendulum_peak(double r, double beta, double omega_r, double delta_c) {
  if (!(r > 1.0)) throw std::invalid_argument("pendulum_peak needs r > 1");
  if (!(beta > 0.0 && omega_r > 0.0) || delta_c >= 0.0) {
    throw std::invalid_argument("pendulum_peak needs beta > 0, omega_r > 0, delta_c < 0");
  }
  const double theta = solve_fixed_point(r).theta_bar;
  const double n_bar = r * critical_pump(delta_c);
  const double mass = kHbar * kWaveNumber * kWaveNumber / (2.0 * omega_r);
  const double A = 2.0 * kHbar * std::abs(delta_c) * n_bar * theta;  // V = -A cos kx
  PendulumPeak out;
  out.omega0 = std::sqrt(4.0 * omega_r * std::abs(delta_c) * n_bar * theta);

  // Boltzmann weight exp(-beta E), E = p^2/2m - A cos x, on a product grid
  constexpr std::size_t nx = 1024, np = 1024;
  const double sx = std::min(std::numbers::pi, 12.0 / std::sqrt(std::max(beta * A, 1e-300)));
  const double pmax = 10.0 * std::sqrt(mass / beta);
  const double dx = 2.0 * sx / nx, dp = 2.0 * pmax / np;
  double wsum = 0.0, osum = 0.0, rot = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = -sx + (static_cast<double>(i) + 0.5) * dx;
    const double vx = -A * std::cos(x);
    for (std::size_t j = 0; j < np; ++j) {
      const double p = -pmax + (static_cast<double>(j) + 0.5) * dp;
      const double E = p * p / (2.0 * mass) + vx;
      const double w = std::exp(-beta * (E + A));
      if (std::abs(E - A) < 1e-6 * A) continue;
      const double k2 = (E + A) / (2.0 * A);
      double omega;
      if (k2 < 1.0) {
        omega = std::numbers::pi * out.omega0 / (2.0 * special::elliptic_k(std::sqrt(k2)));
      } else {
        const double km = std::sqrt(k2);
        omega = std::numbers::pi * out.omega0 * km / special::elliptic_k(1.0 / km);
        rot += w;
      }
      wsum += w;
      osum += w * omega;
    }
  }
  out.mean_omega = osum / wsum;
  out.rotating_fraction = rot / wsum;
  return out;
}

}  // namespace cavkin
