#include "cavkin/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cavkin/errors.hpp"

namespace cavkin {

MeanFieldSolver::MeanFieldSolver(const DerivedCoefficients& c, const PhaseSpaceGrid& grid, MfOptions opts)
    : c_(c),
      opts_(opts),
      shifter_(grid),
      sin_x_(grid.nx),
      cos_x_(grid.nx),
      row_shift_(grid.np),
      col_shift_(grid.nx),
      flux_(grid.nx),
      scratch_() {
  if (opts_.n_particles < 1) throw std::invalid_argument("MfOptions.n_particles must be >= 1");
  for (std::size_t i = 0; i < grid.nx; ++i) {
    sin_x_[i] = std::sin(grid.x(i));
    cos_x_[i] = std::cos(grid.x(i));
  }
}

double MeanFieldSolver::max_stable_dt(const PhaseSpaceField& f) const {
  const auto& g = f.grid();
  const auto fn = functionals(f);
  const double n1 = opts_.n_particles - 1;
  const double self = opts_.include_self_terms ? 1.0 : 0.0;
  const double fmax = c_.S2 * (std::abs(c_.F0) * (self + n1 * std::abs(fn.theta)) +
                               std::abs(c_.Gamma0) * n1 * std::abs(fn.xi));
  double limit = cfl_limit(g, c_.mass, fmax);
  if (c_.S2 * c_.D0 > 0.0) limit = std::min(limit, 0.25 * g.dp() * g.dp() / (c_.S2 * c_.D0));
  return limit;
}

void MeanFieldSolver::step(PhaseSpaceField& f, double dt) {
  const auto& g = shifter_.grid();
  const double limit = max_stable_dt(f);
  if (!(dt > 0.0) || dt > limit) {
    std::ostringstream os;
    os << "meanfield step: dt = " << dt << " exceeds the stability bound " << limit;
    throw NumericalError(os.str());
  }
  if (dt != cached_dt_) {
    for (std::size_t j = 0; j < g.np; ++j) row_shift_[j] = g.p(j) / c_.mass * 0.5 * dt;
    cached_dt_ = dt;
  }

  shifter_.shift_rows(f, row_shift_);

  if (c_.S2 != 0.0) {
    const auto m = moments(f);
    const double n1 = opts_.n_particles - 1;
    const double self = opts_.include_self_terms ? 1.0 : 0.0;
    // <sin^2 cos> is needed for the self-force contribution to dXi/dt
    double sc2 = 0.0;
    if (self != 0.0) {
      for (std::size_t j = 0; j < g.np; ++j) {
        const double* row = f.values().data() + j * g.nx;
        for (std::size_t i = 0; i < g.nx; ++i) sc2 += sin_x_[i] * sin_x_[i] * cos_x_[i] * row[i];
      }
      sc2 *= g.dp() / static_cast<double>(g.nx);
    }
    const double c1 = c_.S2 * c_.F0 * (n1 * m.theta * m.sin2 + self * sc2);
    const double c2 = c_.S2 * c_.Gamma0 * n1 * m.sin2;
    const double xi_mid = (m.xi + c1 * 0.5 * dt) / (1.0 - c2 * 0.5 * dt);
    const double a_sin = c_.S2 * (c_.F0 * n1 * m.theta + c_.Gamma0 * n1 * xi_mid);
    const double a_self = c_.S2 * c_.F0 * self;
    for (std::size_t i = 0; i < g.nx; ++i) {
      col_shift_[i] = (a_sin + a_self * cos_x_[i]) * sin_x_[i] * dt;
    }
    shifter_.shift_columns(f, col_shift_);
    collide(f, dt);
    if (opts_.include_eta && c_.eta0 != 0.0) eta_term(f, dt);
  }

  shifter_.shift_rows(f, row_shift_);
  f.set_time(f.time() + dt);
}

void MeanFieldSolver::collide(PhaseSpaceField& f, double dt) {
  const auto& g = f.grid();
  const double dp = g.dp();
  const double friction = opts_.include_self_terms ? c_.Gamma0 : 0.0;
  const double r = dt / dp;
  double* v = f.values().data();
  std::fill(flux_.begin(), flux_.end(), 0.0);  // flux through the lower face of row j
  for (std::size_t j = 0; j < g.np; ++j) {
    double* row = v + j * g.nx;
    if (j + 1 < g.np) {
      const double* up = row + g.nx;
      const double pf = g.p(j) + 0.5 * dp;
      for (std::size_t i = 0; i < g.nx; ++i) {
        const double a = c_.S2 * sin_x_[i] * sin_x_[i];
        const double hi = a * (friction * pf * 0.5 * (row[i] + up[i]) - c_.D0 * (up[i] - row[i]) / dp);
        row[i] -= r * (hi - flux_[i]);
        flux_[i] = hi;
      }
    } else {
      for (std::size_t i = 0; i < g.nx; ++i) row[i] += r * flux_[i];
    }
  }
}

void MeanFieldSolver::eta_term(PhaseSpaceField& f, double dt) {
  const auto& g = f.grid();
  const std::size_t nx = g.nx, np = g.np;
  scratch_.resize(g.size());
  const double* v = f.values().data();
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t i = 0; i < nx; ++i) scratch_[j * nx + i] = sin_x_[i] * sin_x_[i] * v[j * nx + i];
  }
  const double coef = c_.S2 * c_.eta0 * dt / (4.0 * g.dx() * g.dp());
  double* out = f.values().data();
  auto s = [&](std::size_t i, long j) -> double {
    if (j < 0 || j >= static_cast<long>(np)) return 0.0;
    return scratch_[static_cast<std::size_t>(j) * nx + i];
  };
  for (std::size_t j = 0; j < np; ++j) {
    const long jl = static_cast<long>(j);
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      out[j * nx + i] += coef * (s(ip, jl + 1) - s(im, jl + 1) - s(ip, jl - 1) + s(im, jl - 1));
    }
  }
}

PhaseSpaceField perturbed_initial(const PhaseSpaceGrid& grid, double mass, double beta0, double delta_n) {
  if (!(std::abs(delta_n) < 1.0)) throw std::invalid_argument("|delta_N| must be < 1");
  return modulated_thermal_field(grid, mass, beta0, delta_n);
}

double default_delta_n(int n_particles) { return std::sqrt(1.0 / (2.0 * n_particles)); }

RelaxationResult run_relaxation(const RelaxationConfig& cfg, const FieldObserver& observer) {
  if (!(cfg.dt > 0.0 && cfg.t_end >= 0.0 && cfg.sample_dt > 0.0)) {
    throw std::invalid_argument("relaxation needs dt > 0, t_end >= 0, sample_dt > 0");
  }
  const auto& c = cfg.coeffs;
  const double beta_min = c.beta > 0.0 ? std::min(cfg.beta0, c.beta) : cfg.beta0;
  const auto grid = resolve_grid(cfg.grid, c.mass, beta_min);
  const double delta = cfg.delta_n < 0.0 ? default_delta_n(cfg.options.n_particles) : cfg.delta_n;

  RelaxationResult out{TimeSeries({"t", "theta", "theta_sq", "kinetic_temp", "xi", "norm"}),
                       perturbed_initial(grid, c.mass, cfg.beta0, delta)};
  auto& f = out.final_field;
  MeanFieldSolver solver(c, grid, cfg.options);

  const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
  const long every = std::max(1L, static_cast<long>(std::llround(cfg.sample_dt / cfg.dt)));
  auto sample = [&](long k) {
    const auto m = moments(f);
    if (!std::isfinite(m.norm) || std::abs(m.norm - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "meanfield: norm " << m.norm << " at t = " << k * cfg.dt;
      throw NumericalError(os.str());
    }
    out.series.add_row({static_cast<double>(k) * cfg.dt, m.theta, m.theta * m.theta, m.p2 / c.mass, m.xi, m.norm});
    if (observer) observer(f);
  };
  sample(0);
  for (long k = 1; k <= n_steps; ++k) {
    solver.step(f, cfg.dt);
    f.set_time(static_cast<double>(k) * cfg.dt);
    if (k % every == 0) sample(k);
  }

  const auto t = out.series.column("t");
  const auto th = out.series.column("theta");
  const auto th2 = out.series.column("theta_sq");
  const double peak = *std::max_element(th2.begin(), th2.end());
  for (std::size_t k = 0; k < th2.size(); ++k) {
    if (peak > 0.0 && th2[k] >= 0.5 * peak) {
      out.plateau_time = t[k];
      break;
    }
  }
  std::size_t start = th.size();
  for (std::size_t k = th.size(); k-- > 1;) {
    const double rate = std::abs(th[k] - th[k - 1]) / (t[k] - t[k - 1]);
    if (rate >= cfg.convergence_tol) break;
    start = k - 1;
  }
  if (th.size() > 2 && start + 2 < th.size()) {
    out.converged = true;
    out.convergence_time = t[start];
  }
  return out;
}

}  // namespace cavkin
