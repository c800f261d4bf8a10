#include "cavkin/nbody.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cavkin/errors.hpp"
#include "cavkin/parallel.hpp"
#include "cavkin/philox.hpp"
#include "cavkin/steady.hpp"

namespace cavkin {
namespace {

constexpr double kLambda = 2.0 * std::numbers::pi;
constexpr std::uint32_t kPurposePosition = 0;
constexpr std::uint32_t kPurposeMomentum = 1;
constexpr std::uint32_t kPurposeNoise = 2;
constexpr std::uint32_t kPurposeStationaryX = 3;
constexpr std::uint32_t kPurposeStationaryP = 4;

inline double wrap(double x) {
  if (x >= kLambda) {
    x -= kLambda;
    if (x >= kLambda) x = std::fmod(x, kLambda);
  } else if (x < 0.0) {
    x += kLambda;
    if (x < 0.0) x = std::fmod(x, kLambda) + kLambda;
    if (x >= kLambda) x -= kLambda;
  }
  return x;
}

// Per-sample, per-trajectory record.
struct Sample {
  double theta;
  double cos2;  // (1/N) sum cos^2
  double temp;  // (1/N) sum p^2 / m
  double xi;    // (1/N) sum p sin
};

class Trajectory {
 public:
  Trajectory(const NBodyConfig& cfg, std::uint32_t id, std::span<double> x, std::span<double> p)
      : cfg_(cfg), c_(cfg.coeffs), id_(id), x_(x), p_(p), s_(x.size()), co_(x.size()) {
    if (cfg.integrator == Integrator::Heun) {
      xt_.resize(x.size());
      pt_.resize(x.size());
      st_.resize(x.size());
    }
  }

  void step(std::uint64_t k) {
    const double xi = philox_normal(cfg_.seed, id_, kPurposeNoise, k);
    switch (cfg_.integrator) {
      case Integrator::Splitting:
        split_step(xi);
        break;
      case Integrator::EulerMaruyama:
        euler_step(xi);
        break;
      case Integrator::Heun:
        heun_step(xi);
        break;
    }
  }

  Sample sample() const {
    const std::size_t n = x_.size();
    double c = 0.0, c2 = 0.0, p2 = 0.0, ps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double cs = std::cos(x_[i]);
      c += cs;
      c2 += cs * cs;
      p2 += p_[i] * p_[i];
      ps += p_[i] * std::sin(x_[i]);
    }
    const double inv = 1.0 / static_cast<double>(n);
    return {c * inv, c2 * inv, p2 * inv / c_.mass, ps * inv};
  }

 private:
  void trig(std::span<const double> x, std::vector<double>& s, std::vector<double>& co) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = std::sin(x[i]);
      co[i] = std::cos(x[i]);
    }
  }

  void drift_x(double h) {
    const double f = h / c_.mass;
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = wrap(x_[i] + f * p_[i]);
  }

  void split_step(double noise) {
    const double h = cfg_.dt;
    const std::size_t n = x_.size();
    drift_x(0.5 * h);
    trig(x_, s_, co_);
    double csum = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      csum += co_[i];
      ss += s_[i] * s_[i];
    }
    const double kick = 0.5 * h * c_.S2 * c_.F0 * csum;
    for (std::size_t i = 0; i < n; ++i) p_[i] += kick * s_[i];

    if (ss > 0.0) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += s_[i] * p_[i];
      const double norm = std::sqrt(ss);
      proj /= norm;
      const double a = -c_.S2 * c_.Gamma0 * ss;
      const double dif = c_.S2 * c_.D0 * ss;
      double next;
      if (a != 0.0) {
        const double var = dif / a * -std::expm1(-2.0 * a * h);
        next = proj * std::exp(-a * h) + std::sqrt(std::max(var, 0.0)) * noise;
      } else {
        next = proj + std::sqrt(2.0 * dif * h) * noise;
      }
      const double d = (next - proj) / norm;
      for (std::size_t i = 0; i < n; ++i) p_[i] += d * s_[i];
    }

    for (std::size_t i = 0; i < n; ++i) p_[i] += kick * s_[i];
    drift_x(0.5 * h);
  }

  // dp drift + noise at positions given by (s, co) and momenta q
  void increment(std::span<const double> q, const std::vector<double>& s, const std::vector<double>& co,
                 double noise, std::vector<double>& out) {
    const std::size_t n = q.size();
    double csum = 0.0, proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      csum += co[i];
      proj += s[i] * q[i];
    }
    const double h = cfg_.dt;
    const double a = c_.S2 * (c_.F0 * csum + c_.Gamma0 * proj) * h + std::sqrt(2.0 * c_.D0 * c_.S2 * h) * noise;
    for (std::size_t i = 0; i < n; ++i) out[i] = a * s[i];
  }

  void euler_step(double noise) {
    const std::size_t n = x_.size();
    trig(x_, s_, co_);
    if (dp_.size() != n) dp_.resize(n);
    increment(p_, s_, co_, noise, dp_);
    const double f = cfg_.dt / c_.mass;
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = wrap(x_[i] + f * p_[i]);
      p_[i] += dp_[i];
    }
  }

  void heun_step(double noise) {
    const std::size_t n = x_.size();
    const double f = cfg_.dt / c_.mass;
    trig(x_, s_, co_);
    if (dp_.size() != n) {
      dp_.resize(n);
      dpt_.resize(n);
      cot_.resize(n);
    }
    increment(p_, s_, co_, noise, dp_);
    for (std::size_t i = 0; i < n; ++i) {
      xt_[i] = x_[i] + f * p_[i];
      pt_[i] = p_[i] + dp_[i];
    }
    trig(xt_, st_, cot_);
    increment(pt_, st_, cot_, noise, dpt_);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = wrap(x_[i] + 0.5 * f * (p_[i] + pt_[i]));
      p_[i] += 0.5 * (dp_[i] + dpt_[i]);
    }
  }

  const NBodyConfig& cfg_;
  const DerivedCoefficients& c_;
  std::uint32_t id_;
  std::span<double> x_, p_;
  std::vector<double> s_, co_, dp_, xt_, pt_, st_, cot_, dpt_;
};

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(std::span<const double> v, double m) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double a : v) s += (a - m) * (a - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::span<const double> ParticleEnsemble::x_of(int traj) const {
  return std::span<const double>(x).subspan(static_cast<std::size_t>(traj) * n_particles, n_particles);
}
std::span<const double> ParticleEnsemble::p_of(int traj) const {
  return std::span<const double>(p).subspan(static_cast<std::size_t>(traj) * n_particles, n_particles);
}

DriftDiffusion drift_diffusion_map(std::span<const double> x, std::span<const double> p,
                                   const DerivedCoefficients& c) {
  if (x.size() != p.size()) throw std::invalid_argument("x and p sizes differ");
  const std::size_t n = x.size();
  DriftDiffusion d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  double csum = 0.0, proj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    csum += std::cos(x[j]);
    proj += std::sin(x[j]) * p[j];
  }
  const double amp = std::sqrt(2.0 * c.D0 * c.S2);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sin(x[i]);
    d.dx[i] = p[i] / c.mass;
    d.dp[i] = c.S2 * c.F0 * csum * s + c.S2 * c.Gamma0 * s * proj;
    d.sigma[i] = amp * s;
  }
  return d;
}

Integrator integrator_from_string(const std::string& name) {
  if (name == "splitting") return Integrator::Splitting;
  if (name == "euler") return Integrator::EulerMaruyama;
  if (name == "heun") return Integrator::Heun;
  throw std::invalid_argument("unknown integrator '" + name + "' (splitting, euler, heun)");
}

std::string to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::Splitting:
      return "splitting";
    case Integrator::EulerMaruyama:
      return "euler";
    case Integrator::Heun:
      return "heun";
  }
  return "?";
}

ParticleEnsemble initial_ensemble(int n_particles, int trajectories, double mass, double beta0,
                                  std::uint64_t seed) {
  if (n_particles < 1 || trajectories < 1) throw std::invalid_argument("need N >= 1 and T >= 1");
  if (!(beta0 > 0.0)) throw std::invalid_argument("beta0 must be positive");
  ParticleEnsemble e;
  e.n_particles = n_particles;
  e.trajectories = trajectories;
  const std::size_t total = static_cast<std::size_t>(n_particles) * trajectories;
  e.x.resize(total);
  e.p.resize(total);
  const double sd = std::sqrt(mass / beta0);
  for (int t = 0; t < trajectories; ++t) {
    for (int i = 0; i < n_particles; ++i) {
      const std::size_t k = static_cast<std::size_t>(t) * n_particles + i;
      const auto id = static_cast<std::uint32_t>(t);
      e.x[k] = wrap(kLambda * philox_uniform2(seed, id, kPurposePosition, i)[0]);
      e.p[k] = sd * philox_normal(seed, id, kPurposeMomentum, i);
    }
  }
  return e;
}

ParticleEnsemble stationary_ensemble(int n_particles, int trajectories, double r, double mass, double beta,
                                     std::uint64_t seed) {
  if (n_particles < 1 || trajectories < 1) throw std::invalid_argument("need N >= 1 and T >= 1");
  if (!(beta > 0.0 && mass > 0.0)) throw std::invalid_argument("beta and mass must be positive");
  const double z = 2.0 * r * solve_fixed_point(r).theta_bar;
  ParticleEnsemble e;
  e.n_particles = n_particles;
  e.trajectories = trajectories;
  const std::size_t total = static_cast<std::size_t>(n_particles) * trajectories;
  e.x.resize(total);
  e.p.resize(total);
  const double sd = std::sqrt(mass / beta);
  for (int t = 0; t < trajectories; ++t) {
    PhiloxStream ux(seed, static_cast<std::uint32_t>(t), kPurposeStationaryX);
    PhiloxStream np(seed, static_cast<std::uint32_t>(t), kPurposeStationaryP);
    for (int i = 0; i < n_particles; ++i) {
      double x = 0.0;
      do {
        x = kLambda * ux.uniform();
      } while (ux.uniform() > std::exp(z * (std::cos(x) - 1.0)));
      const std::size_t k = static_cast<std::size_t>(t) * n_particles + i;
      e.x[k] = x;
      e.p[k] = sd * np.normal();
    }
  }
  return e;
}

NBodyResult simulate(const NBodyConfig& cfg, const ParticleEnsemble* start) {
  if (!(cfg.dt > 0.0 && cfg.t_end >= 0.0 && cfg.sample_dt > 0.0)) {
    throw std::invalid_argument("nbody needs dt > 0, t_end >= 0, sample_dt > 0");
  }
  const int N = cfg.coeffs.n_particles;
  NBodyResult out;
  out.final_state = start ? *start
                          : initial_ensemble(N, cfg.trajectories, cfg.coeffs.mass, cfg.beta0, cfg.seed);
  auto& e = out.final_state;
  if (e.n_particles != N) throw std::invalid_argument("ensemble particle number does not match the model");
  const int T = e.trajectories;

  const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.t_end / cfg.dt));
  const auto every = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(cfg.sample_dt / cfg.dt)));
  const std::size_t n_samples = static_cast<std::size_t>(n_steps / every) + 1;
  const std::uint64_t k0 = e.step;
  const double t0 = e.time;

  std::vector<std::vector<Sample>> samples(static_cast<std::size_t>(T));
  parallel_for(static_cast<std::size_t>(T), cfg.threads, [&](std::size_t traj) {
    auto x = std::span<double>(e.x).subspan(traj * N, N);
    auto p = std::span<double>(e.p).subspan(traj * N, N);
    Trajectory tr(cfg, static_cast<std::uint32_t>(traj), x, p);
    auto& buf = samples[traj];
    buf.reserve(n_samples);
    auto record = [&](std::uint64_t k) {
      const Sample s = tr.sample();
      if (!std::isfinite(s.theta) || !std::isfinite(s.temp)) {
        std::ostringstream os;
        os << "nbody: non-finite state in trajectory " << traj << " at step " << k0 + k;
        throw NumericalError(os.str());
      }
      buf.push_back(s);
    };
    record(0);
    for (std::uint64_t k = 1; k <= n_steps; ++k) {
      tr.step(k0 + k);
      if (k % every == 0) record(k);
    }
  });
  e.step = k0 + n_steps;
  e.time = t0 + static_cast<double>(n_steps) * cfg.dt;

  out.series = TimeSeries({"t", "theta_sq_mean", "theta_sq_stderr", "theta4_mean", "g2", "abs_theta_mean",
                           "kinetic_temp", "kinetic_temp_stderr", "xi_mean", "c2", "c2_aligned"});
  if (cfg.keep_theta_traces) {
    out.theta_traces.assign(static_cast<std::size_t>(T), std::vector<double>(n_samples));
    for (int t = 0; t < T; ++t) {
      for (std::size_t s = 0; s < n_samples; ++s) out.theta_traces[t][s] = samples[t][s].theta;
    }
  }
  std::vector<double> th2(T), th4(T), abs_th(T), th(T), temp(T), xi(T), pair(T);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (int t = 0; t < T; ++t) {
      const Sample& v = samples[t][s];
      th[t] = v.theta;
      th2[t] = v.theta * v.theta;
      th4[t] = th2[t] * th2[t];
      abs_th[t] = std::abs(v.theta);
      temp[t] = v.temp;
      xi[t] = v.xi;
      pair[t] = N > 1 ? (N * th2[t] - v.cos2) / (N - 1.0) : 0.0;
    }
    const double m2 = mean(th2), m4 = mean(th4), mt = mean(temp), mth = mean(th), mabs = mean(abs_th);
    const double mp = mean(pair);
    const double c2 = N > 1 ? mp - mth * mth : 0.0;
    const double c2a = N > 1 ? mp - mabs * mabs : 0.0;
    out.series.add_row({t0 + static_cast<double>(s * every) * cfg.dt, m2, stderr_of(th2, m2), m4,
                        m2 > 0.0 ? m4 / (m2 * m2) : 0.0, mabs, mt, stderr_of(temp, mt), mean(xi), c2, c2a});
  }
  return out;
}

PairCorrelation pair_correlation(const ParticleEnsemble& e) {
  const int N = e.n_particles;
  if (N < 2) throw std::invalid_argument("pair_correlation needs N >= 2");
  double pair = 0.0, mean_cos = 0.0, mean_abs = 0.0;
  for (int t = 0; t < e.trajectories; ++t) {
    double c = 0.0, c2 = 0.0;
    for (double x : e.x_of(t)) {
      const double cs = std::cos(x);
      c += cs;
      c2 += cs * cs;
    }
    pair += (c * c - c2) / (static_cast<double>(N) * (N - 1));
    mean_cos += c / N;
    mean_abs += std::abs(c) / N;
  }
  const double T = e.trajectories;
  pair /= T;
  mean_cos /= T;
  mean_abs /= T;
  return {pair - mean_cos * mean_cos, pair - mean_abs * mean_abs};
}

void write_ensemble(const ParticleEnsemble& e, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "ensemble format is little-endian");
  const nlohmann::json header = {
      {"n_particles", e.n_particles}, {"trajectories", e.trajectories}, {"time", e.time}, {"step", e.step}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open ensemble for writing: " + path.string());
  const std::string h = header.dump() + "\n";
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(e.x.data()), static_cast<std::streamsize>(e.x.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(e.p.data()), static_cast<std::streamsize>(e.p.size() * sizeof(double)));
}

ParticleEnsemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open ensemble: " + path.string());
  std::string line;
  std::getline(in, line);
  const auto h = nlohmann::json::parse(line);
  ParticleEnsemble e;
  e.n_particles = h.at("n_particles").get<int>();
  e.trajectories = h.at("trajectories").get<int>();
  e.time = h.at("time").get<double>();
  e.step = h.at("step").get<std::uint64_t>();
  const std::size_t total = static_cast<std::size_t>(e.n_particles) * e.trajectories;
  e.x.resize(total);
  e.p.resize(total);
  in.read(reinterpret_cast<char*>(e.x.data()), static_cast<std::streamsize>(total * sizeof(double)));
  in.read(reinterpret_cast<char*>(e.p.data()), static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) throw std::runtime_error("truncated ensemble: " + path.string());
  return e;
}

}  // namespace cavkin
