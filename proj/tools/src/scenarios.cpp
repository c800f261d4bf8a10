#include "scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "cavkin/analysis.hpp"
#include "cavkin/meanfield.hpp"
#include "cavkin/nbody.hpp"
#include "cavkin/observables.hpp"
#include "cavkin/stability.hpp"
#include "cavkin/steady.hpp"
#include "cavkin/vlasov.hpp"

namespace cavkin::cli {
namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sweep(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("sweep needs r_step > 0 and r_max >= r_min");
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }
std::vector<int> ints(const json& j) { return j.get<std::vector<int>>(); }

PhaseSpaceGrid grid_of(const json& g) {
  return {g.at("nx").get<std::size_t>(), g.at("np").get<std::size_t>(), g.at("p_max").get<double>()};
}

// Column subset in the given order.
TimeSeries select(const TimeSeries& s, const std::vector<std::string>& names) {
  TimeSeries out(names);
  std::vector<double> row(names.size());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t k = 0; k < names.size(); ++k) row[k] = s.column(names[k])[i];
    out.add_row(row);
  }
  return out;
}

void check_commensurate(double sample_dt, double dt, const std::string& what) {
  const double k = sample_dt / dt;
  if (std::abs(k - std::round(k)) > 1e-9 * k || std::round(k) < 1.0) {
    throw std::invalid_argument(what + ": sample spacing " + format_double(sample_dt) +
                                " is not a multiple of dt " + format_double(dt));
  }
}

// Writes a snapshot whenever the field time passes the next multiple of `every`.
FieldObserver snapshotter(RunDirectory& dir, double every, const std::string& prefix) {
  if (!(every > 0.0)) return {};
  auto next = std::make_shared<double>(0.0);
  auto index = std::make_shared<int>(0);
  return [&dir, every, prefix, next, index](const PhaseSpaceField& f) {
    if (f.time() + 1e-9 < *next) return;
    char name[64];
    std::snprintf(name, sizeof name, "snapshots/%s_%05d.bin", prefix.c_str(), (*index)++);
    write_snapshot(f, dir.root() / name);
    dir.add(name);
    *next += every;
  };
}

void warn(const DerivedCoefficients& c) {
  for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
}

void run_steady(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  TimeSeries s({"r", "theta_bar", "bunching", "B_quadrature"});
  for (double r : sweep(b["r_min"], b["r_max"], b["r_step"])) {
    const auto fp = solve_fixed_point(r);
    const auto bu = bunching(r);
    s.add_row({r, fp.theta_bar, bu.closed_form, bu.quadrature});
  }
  dir.write_csv("steady.csv", s);
}

QuenchConfig quench_config(const ModelParams& m, const json& b) {
  const auto c = derive_coefficients(m);
  warn(c);
  QuenchConfig q;
  q.params = VlasovParams::from(c);
  q.beta0 = m.beta0;
  q.grid = grid_of(b["grid"]);
  q.dt = b["dt"];
  q.t_end = b["t_end"];
  q.sample_dt = b["sample_dt"];
  q.delta = b["delta"];
  return q;
}

void run_vlasov(const RunConfig& cfg, RunDirectory& dir) {
  const auto q = quench_config(cfg.model, cfg.block);
  const auto res = run_quench(q, snapshotter(dir, cfg.block["snapshot_dt"], "vlasov"));
  dir.write_csv("vlasov.csv", select(res.series, {"t", "theta", "xi2", "energy", "p2", "xi", "norm"}));
}

void run_meanfield(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  const auto c = derive_coefficients(cfg.model);
  warn(c);
  RelaxationConfig rc;
  rc.coeffs = c;
  rc.options = {b["include_eta"].get<bool>(), b["include_self_terms"].get<bool>(), c.n_particles};
  rc.beta0 = cfg.model.beta0;
  rc.grid = grid_of(b["grid"]);
  rc.dt = b["dt"];
  rc.t_end = b["t_end"];
  rc.sample_dt = b["sample_dt"];
  rc.delta_n = b["delta_n"];
  rc.convergence_tol = b["convergence_tol"];
  const auto res = run_relaxation(rc, snapshotter(dir, b["snapshot_dt"], "meanfield"));
  dir.write_csv("meanfield.csv", res.series);
  json summary = {{"converged", res.converged},
                  {"convergence_time", res.convergence_time},
                  {"plateau_time", res.plateau_time},
                  {"theta_bar", solve_fixed_point(c.ratio).theta_bar}};
  if (rc.options.include_self_terms && c.beta > 0.0) summary["theta_bar_finite_n"] = finite_n_fixed_point(c);
  dir.write_json("summary.json", summary);
}

void run_nbody(const RunConfig& cfg, RunDirectory& dir, int threads) {
  const auto& b = cfg.block;
  const auto c = derive_coefficients(cfg.model);
  warn(c);
  NBodyConfig nc;
  nc.coeffs = c;
  nc.beta0 = cfg.model.beta0;
  nc.trajectories = b["trajectories"];
  nc.dt = b["dt"];
  nc.t_end = b["t_end"];
  nc.sample_dt = b["sample_dt"];
  nc.integrator = integrator_from_string(b["integrator"]);
  nc.seed = cfg.model.seed;
  nc.threads = threads;
  nc.keep_theta_traces = b["keep_theta_traces"];

  const std::string initial = b["initial"];
  ParticleEnsemble start;
  const ParticleEnsemble* start_ptr = nullptr;
  if (initial == "stationary") {
    start = stationary_ensemble(c.n_particles, nc.trajectories, c.ratio, c.mass, c.beta, nc.seed);
    start_ptr = &start;
  } else if (initial == "restart") {
    const std::string path = b["restart"];
    if (path.empty()) throw std::invalid_argument("nbody.initial = restart needs nbody.restart");
    start = read_ensemble(path);
    start_ptr = &start;
  } else if (initial != "thermal") {
    throw std::invalid_argument("nbody.initial must be thermal, stationary or restart");
  }

  const auto res = simulate(nc, start_ptr);
  dir.write_csv("nbody.csv", res.series);
  if (nc.keep_theta_traces) {
    std::vector<std::string> names = {"t"};
    for (std::size_t k = 0; k < res.theta_traces.size(); ++k) names.push_back("theta_" + std::to_string(k));
    TimeSeries tr(names);
    const auto t = res.series.column("t");
    std::vector<double> row(names.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      row[0] = t[i];
      for (std::size_t k = 0; k < res.theta_traces.size(); ++k) row[k + 1] = res.theta_traces[k][i];
      tr.add_row(row);
    }
    dir.write_csv("theta_traces.csv", tr);
  }
  if (b["snapshot"].get<bool>()) {
    write_ensemble(res.final_state, dir.snapshots() / "ensemble_final.bin");
    dir.add("snapshots/ensemble_final.bin");
  }
}

struct StabilityRow {
  double gamma_full, gamma_approx, chi;
  int regime;
};

StabilityRow stability_row(const ModelParams& m, double r) {
  const auto c = derive_coefficients(with_pump_ratio(m, r));
  const auto p = DispersionParams::from(c, m.beta0);
  const auto full = growth_rate(p);
  StabilityRow row{full.gamma, kNaN, chi_parameter(p), static_cast<int>(full.regime) - 1};
  try {
    row.gamma_approx = growth_rate_approx(row.chi, m.beta0, c.beta, c.delta_c, c.omega_r);
  } catch (const std::invalid_argument&) {
  }
  return row;
}

void run_stability(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  warn(derive_coefficients(cfg.model));
  TimeSeries s({"r", "gamma_full", "gamma_approx", "chi", "regime"});
  for (double r : sweep(b["r_min"], b["r_max"], b["r_step"])) {
    const auto row = stability_row(cfg.model, r);
    s.add_row({r, row.gamma_full, row.gamma_approx, row.chi, static_cast<double>(row.regime)});
  }
  dir.write_csv("stability.csv", s);
}

void run_oracle(const RunConfig& cfg, RunDirectory& dir) {
  TimeSeries s({"alpha", "N", "theta2", "theta4", "g2", "ncav_over_nbar", "G", "dG", "d2G", "error_estimate"});
  for (double a : doubles(cfg.block["alphas"])) {
    for (int n : ints(cfg.block["n_values"])) {
      const auto o = g_alpha_oracle(a, n);
      s.add_row({a, static_cast<double>(n), o.theta2, o.theta4, o.g2, o.ncav_over_nbar, o.G, o.dG, o.d2G,
                 o.error_estimate});
    }
  }
  dir.write_csv("oracle.csv", s);
}

void run_observables(const RunConfig& cfg, RunDirectory& dir) {
  const double n_crit = critical_pump(cfg.model.delta_c);
  TimeSeries s({"alpha", "N", "ncav_quadrature", "ncav_closed", "g2_quadrature", "g2_factorized", "g2_closed"});
  for (double a : doubles(cfg.block["alphas"])) {
    for (int n : ints(cfg.block["n_values"])) {
      const auto q = ncav_oracle(a, n, n_crit);
      const auto cf = ncav_closed_forms(a, n, n_crit);
      s.add_row({a, static_cast<double>(n), q.n_cav, cf.n_cav, q.g2_zero, g2_factorized(a, n), cf.g2_zero});
    }
  }
  dir.write_csv("observables.csv", s);
}

void run_fig2(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  const int points = b["zeta_points"];
  if (points < 2) throw std::invalid_argument("fig2.zeta_points must be >= 2");
  const double zmax = b["zeta_max"];
  TimeSeries q({"r", "zeta", "q"});
  TimeSeries roots({"r", "theta_bar", "stable"});
  for (double r : doubles(b["r_values"])) {
    for (int i = 0; i < points; ++i) {
      const double z = zmax * i / (points - 1);
      q.add_row({r, z, q_function(2.0 * r * z)});
    }
    const auto fp = solve_fixed_point(r);
    for (std::size_t k = 0; k < fp.roots.size(); ++k) {
      if (fp.roots[k] >= 0.0) roots.add_row({r, fp.roots[k], fp.stable[k] ? 1.0 : 0.0});
    }
  }
  TimeSeries inset({"r", "theta_bar"});
  for (double r : sweep(0.0, b["inset_r_max"], b["inset_r_step"])) inset.add_row({r, solve_fixed_point(r).theta_bar});
  dir.write_csv("fig2_q.csv", q);
  dir.write_csv("fig2_roots.csv", roots);
  dir.write_csv("fig2_inset.csv", inset);
}

void run_fig3(const RunConfig& cfg, RunDirectory& dir) {
  TimeSeries s({"r", "t", "theta", "xi2", "energy"});
  for (double r : doubles(cfg.block["r_values"])) {
    const auto res = run_quench(quench_config(with_pump_ratio(cfg.model, r), cfg.block));
    const auto t = res.series.column("t"), th = res.series.column("theta"), x2 = res.series.column("xi2"),
               e = res.series.column("energy");
    for (std::size_t i = 0; i < t.size(); ++i) s.add_row({r, t[i], th[i], x2[i], e[i]});
  }
  dir.write_csv("fig3.csv", s);
}

void run_fig4(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  TimeSeries curves({"r", "gamma_full", "gamma_approx", "chi"});
  for (double r : sweep(b["r_min"], b["r_max"], b["r_step"])) {
    const auto row = stability_row(cfg.model, r);
    curves.add_row({r, row.gamma_full, row.gamma_approx, row.chi});
  }
  TimeSeries fits({"r", "gamma_fit", "gamma_full", "fit_points", "fit_r2"});
  for (double r : doubles(b["fit_r_values"])) {
    const auto q = quench_config(with_pump_ratio(cfg.model, r), b);
    const auto res = run_quench(q);
    const double theta0 = 0.5 * q.delta;
    const auto fit = fit_log_slope(res.series.column("t"), res.series.column("theta"),
                                   b["fit_lo_factor"].get<double>() * theta0, b["fit_hi"]);
    fits.add_row({r, fit.slope, stability_row(cfg.model, r).gamma_full, static_cast<double>(fit.points), fit.r2});
  }
  dir.write_csv("fig4_curves.csv", curves);
  dir.write_csv("fig4_fits.csv", fits);
}

void run_fig5(const RunConfig& cfg, RunDirectory& dir, int threads) {
  const auto& b = cfg.block;
  TimeSeries spectrum({"r", "omega", "s_omega"});
  TimeSeries peaks({"r", "peak_omega", "omega0", "mean_omega", "rotating_fraction"});
  const auto rs = doubles(b["r_values"]);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto c = derive_coefficients(with_pump_ratio(cfg.model, rs[i]));
    warn(c);
    NBodyConfig nc;
    nc.coeffs = c;
    nc.beta0 = c.beta;
    nc.trajectories = b["trajectories"];
    nc.dt = b["dt"];
    nc.seed = cfg.model.seed + i;
    nc.threads = threads;
    const double burn = b["burn_in"];
    auto state = stationary_ensemble(c.n_particles, nc.trajectories, c.ratio, c.mass, c.beta, nc.seed);
    if (burn > 0.0) {
      nc.t_end = burn;
      nc.sample_dt = burn;
      state = simulate(nc, &state).final_state;
    }
    nc.t_end = b["t_record"];
    nc.sample_dt = b["sample_dt"];
    nc.keep_theta_traces = true;
    const auto rec = simulate(nc, &state);
    SpectrumOptions so;
    so.dt = nc.sample_dt;
    so.max_lag = b["max_lag"].get<std::size_t>();
    so.omega_min = b["omega_min"];
    const auto sp = autocorrelation(rec.theta_traces, so);
    for (std::size_t k = 0; k < sp.omega.size(); ++k) spectrum.add_row({rs[i], sp.omega[k], sp.s_omega[k]});
    const auto pend = pendulum_peak(rs[i], c.beta, c.omega_r, c.delta_c);
    peaks.add_row({rs[i], sp.peak_omega, pend.omega0, pend.mean_omega, pend.rotating_fraction});
  }
  dir.write_csv("fig5_spectrum.csv", spectrum);
  dir.write_csv("fig5_peaks.csv", peaks);
}

void run_fig7(const RunConfig& cfg, RunDirectory& dir, int threads) {
  const auto& b = cfg.block;
  const auto ns = ints(b["n_values"]);
  const auto ts = ints(b["trajectories"]);
  if (ns.size() != ts.size()) throw std::invalid_argument("fig7.n_values and fig7.trajectories differ in length");
  const double t_ref = b["prethermal_time"];
  TimeSeries summary({"N", "trajectories", "asymptote_meanfield", "asymptote_nbody", "tau_meanfield", "tau_nbody",
                      "tau_ratio"});
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int N = ns[i];
    const auto c = derive_coefficients(with_particle_number(cfg.model, N));
    warn(c);
    const double t_end = b["t_end_over_n"].get<double>() * N;
    const double sample_dt = b["sample_dt_over_n"].get<double>() * N;
    check_commensurate(sample_dt, b["mf_dt"], "fig7 meanfield");
    check_commensurate(sample_dt, b["nbody_dt"], "fig7 nbody");

    RelaxationConfig rc;
    rc.coeffs = c;
    rc.options = {false, true, N};
    rc.beta0 = cfg.model.beta0;
    rc.grid = grid_of(b["grid"]);
    rc.dt = b["mf_dt"];
    rc.t_end = t_end;
    rc.sample_dt = sample_dt;
    const auto mf = run_relaxation(rc);

    NBodyConfig nc;
    nc.coeffs = c;
    nc.beta0 = cfg.model.beta0;
    nc.trajectories = ts[i];
    nc.dt = b["nbody_dt"];
    nc.t_end = t_end;
    nc.sample_dt = sample_dt;
    nc.integrator = integrator_from_string(b["integrator"]);
    nc.seed = cfg.model.seed;
    nc.threads = threads;
    const auto nb = simulate(nc);

    const auto tm = mf.series.column("t");
    const auto tn = nb.series.column("t");
    if (tm.size() != tn.size()) throw std::logic_error("fig7: meanfield and nbody time grids differ");
    TimeSeries mcsv({"t", "t_over_n", "t_times_n", "theta_sq", "theta", "kinetic_temp"});
    for (std::size_t k = 0; k < tm.size(); ++k) {
      mcsv.add_row({tm[k], tm[k] / N, tm[k] * N, mf.series.column("theta_sq")[k], mf.series.column("theta")[k],
                    mf.series.column("kinetic_temp")[k]});
    }
    TimeSeries ncsv({"t", "t_over_n", "t_times_n", "theta_sq", "theta_sq_stderr", "kinetic_temp", "c2_aligned"});
    for (std::size_t k = 0; k < tn.size(); ++k) {
      ncsv.add_row({tn[k], tn[k] / N, tn[k] * N, nb.series.column("theta_sq_mean")[k],
                    nb.series.column("theta_sq_stderr")[k], nb.series.column("kinetic_temp")[k],
                    nb.series.column("c2_aligned")[k]});
    }
    const std::string stem = "fig7_N" + std::to_string(N);
    dir.write_csv(stem + "_meanfield.csv", mcsv);
    dir.write_csv(stem + "_nbody.csv", ncsv);

    const double fp = finite_n_fixed_point(c);
    const double a_mf = fp * fp;
    const double a_nb = g_alpha_oracle(c.ratio, N).theta2;
    const double tau_mf = relaxation_time(tm, mf.series.column("theta_sq"), t_ref, a_mf, 0.9, 0);
    const double tau_nb = relaxation_time(tn, nb.series.column("theta_sq_mean"), t_ref, a_nb, 0.9, 10);
    summary.add_row({static_cast<double>(N), static_cast<double>(ts[i]), a_mf, a_nb, tau_mf, tau_nb, tau_nb / tau_mf});
  }
  dir.write_csv("fig7_summary.csv", summary);
}

void run_fig8(const RunConfig& cfg, RunDirectory& dir) {
  const auto& b = cfg.block;
  const double n_crit = critical_pump(cfg.model.delta_c);
  TimeSeries s({"r", "N", "g2_meanfield", "g2_nbody", "g2_limit"});
  for (int n : ints(b["n_values"])) {
    for (double r : sweep(b["r_min"], b["r_max"], b["r_step"])) {
      s.add_row({r, static_cast<double>(n), g2_factorized(r, n), g_alpha_oracle(r, n).g2,
                 ncav_closed_forms(r, n, n_crit).g2_zero});
    }
  }
  dir.write_csv("fig8.csv", s);
}

}  // namespace

void run_scenario(const RunConfig& cfg, RunDirectory& dir, int threads) {
  const std::string& s = cfg.scenario;
  if (s == "steady") return run_steady(cfg, dir);
  if (s == "vlasov") return run_vlasov(cfg, dir);
  if (s == "meanfield") return run_meanfield(cfg, dir);
  if (s == "nbody") return run_nbody(cfg, dir, threads);
  if (s == "stability") return run_stability(cfg, dir);
  if (s == "oracle") return run_oracle(cfg, dir);
  if (s == "observables") return run_observables(cfg, dir);
  if (s == "fig2") return run_fig2(cfg, dir);
  if (s == "fig3") return run_fig3(cfg, dir);
  if (s == "fig4") return run_fig4(cfg, dir);
  if (s == "fig5") return run_fig5(cfg, dir, threads);
  if (s == "fig7") return run_fig7(cfg, dir, threads);
  if (s == "fig8") return run_fig8(cfg, dir);
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

}  // namespace cavkin::cli
