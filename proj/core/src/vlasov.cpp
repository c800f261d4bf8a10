#include "cavkin/vlasov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cavkin/errors.hpp"

namespace cavkin {

VlasovParams VlasovParams::from(const DerivedCoefficients& c) {
  return VlasovParams{c.mass, c.delta_c, c.n_bar, c.beta};
}

double VlasovParams::theta_coeff() const { return 2.0 * kHbar * delta_c * n_bar; }

double VlasovParams::xi_coeff() const {
  return -(kHbar * kHbar * kWaveNumber / mass) * n_bar * beta * kKappa;
}

double potential_amplitude(const VlasovParams& p, double theta, double xi) {
  return p.theta_coeff() * theta + p.xi_coeff() * xi;
}

double energy(const PhaseSpaceField& f, const VlasovParams& p) {
  const auto m = moments(f);
  return m.p2 / (2.0 * p.mass) + kHbar * p.delta_c * p.n_bar * m.theta * m.theta;
}

double cfl_limit(const PhaseSpaceGrid& g, double mass, double force_max) {
  const double stream = g.dx() * mass / g.p_max;
  const double kick = force_max > 0.0 ? g.dp() / force_max : std::numeric_limits<double>::infinity();
  return 0.5 * std::min(stream, kick);
}

PhaseSpaceGrid resolve_grid(PhaseSpaceGrid grid, double mass, double beta) {
  if (grid.p_max <= 0.0) grid.p_max = 6.0 * std::sqrt(mass / beta);
  return grid;
}

VlasovSolver::VlasovSolver(const VlasovParams& params, const PhaseSpaceGrid& grid)
    : params_(params), shifter_(grid), row_shift_(grid.np), col_shift_(grid.nx), sin_x_(grid.nx) {
  for (std::size_t i = 0; i < grid.nx; ++i) sin_x_[i] = std::sin(grid.x(i));
}

double VlasovSolver::max_stable_dt(const PhaseSpaceField& f) const {
  const auto fn = functionals(f);
  const double a = std::abs(potential_amplitude(params_, fn.theta, fn.xi)) * kWaveNumber;
  return cfl_limit(f.grid(), params_.mass, a);
}

void VlasovSolver::step(PhaseSpaceField& f, double dt) {
  const auto& g = shifter_.grid();
  const double limit = max_stable_dt(f);
  if (!(dt > 0.0) || dt > limit) {
    std::ostringstream os;
    os << "vlasov step: dt = " << dt << " violates the CFL bound " << limit;
    throw NumericalError(os.str());
  }
  if (dt != cached_dt_) {
    for (std::size_t j = 0; j < g.np; ++j) row_shift_[j] = g.p(j) / params_.mass * 0.5 * dt;
    cached_dt_ = dt;
  }

  shifter_.shift_rows(f, row_shift_);

  const auto m = moments(f);
  const double c1 = params_.theta_coeff() * m.theta * kWaveNumber;
  const double c2 = params_.xi_coeff() * kWaveNumber;
  // Xi evolves during the kick through A itself; midpoint value
  const double xi_mid = (m.xi + c1 * m.sin2 * 0.5 * dt) / (1.0 - c2 * m.sin2 * 0.5 * dt);
  const double amp = (params_.theta_coeff() * m.theta + params_.xi_coeff() * xi_mid) * kWaveNumber;
  if (amp != 0.0) {
    for (std::size_t i = 0; i < g.nx; ++i) col_shift_[i] = amp * sin_x_[i] * dt;
    shifter_.shift_columns(f, col_shift_);
  }

  shifter_.shift_rows(f, row_shift_);
  f.set_time(f.time() + dt);
}

QuenchResult run_quench(const QuenchConfig& cfg, const FieldObserver& observer) {
  if (!(cfg.beta0 > 0.0)) throw std::invalid_argument("beta0 must be positive");
  if (!(cfg.dt > 0.0 && cfg.t_end >= 0.0 && cfg.sample_dt > 0.0)) {
    throw std::invalid_argument("quench needs dt > 0, t_end >= 0, sample_dt > 0");
  }
  const auto grid = resolve_grid(cfg.grid, cfg.params.mass, cfg.beta0);
  QuenchResult out{TimeSeries({"t", "theta", "xi", "xi2", "energy", "p2", "norm"}),
                   modulated_thermal_field(grid, cfg.params.mass, cfg.beta0, cfg.delta)};
  auto& f = out.final_field;
  VlasovSolver solver(cfg.params, grid);

  const auto n_steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
  const long every = std::max(1L, static_cast<long>(std::llround(cfg.sample_dt / cfg.dt)));
  auto sample = [&](long k) {
    const auto m = moments(f);
    if (!std::isfinite(m.norm) || std::abs(m.norm - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "vlasov: norm " << m.norm << " at t = " << k * cfg.dt;
      throw NumericalError(os.str());
    }
    const double e = m.p2 / (2.0 * cfg.params.mass) + kHbar * cfg.params.delta_c * cfg.params.n_bar * m.theta * m.theta;
    out.series.add_row({static_cast<double>(k) * cfg.dt, m.theta, m.xi, m.xi * m.xi, e, m.p2, m.norm});
    if (observer) observer(f);
  };
  sample(0);
  for (long k = 1; k <= n_steps; ++k) {
    solver.step(f, cfg.dt);
    f.set_time(static_cast<double>(k) * cfg.dt);
    if (k % every == 0) sample(k);
  }
  return out;
}

}  // namespace cavkin
