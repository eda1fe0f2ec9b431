// Implicit Euler integration of the coupled quasilinear system. Each step is
// a short fixed-point loop over linear solves with frozen coefficients; the
// frozen operator is symmetric positive semidefinite with A 1 = 0, so
// M/dt + A is SPD and the step conserves the lumped total mass up to the
// inner-solve residual.

#include "bulkface/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"
#include "bulkface/solver.hpp"

namespace bulkface {

void TimeStepConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (!(picard_tol > 0.0)) throw ConfigError("time.picard_tol must be positive");
  if (picard_max < 1) throw ConfigError("time.picard_max must be >= 1");
  if (!(linear_tol > 0.0)) throw ConfigError("time.linear_tol must be positive");
  if (dt_min < 0.0) throw ConfigError("time.dt_min must be nonnegative");
  if (snapshot_every < 1) throw ConfigError("time.snapshot_every must be >= 1");
}

namespace {

struct StepWorkspace {
  std::vector<double> mass_diag;
  std::vector<double> shifted_diag;
  std::vector<double> rhs_mass;  // M u_n / dt
  std::vector<double> rhs;
  std::vector<double> w;
  std::vector<double> x;
};

StepDiagnostics make_diagnostics(std::span<const double> u,
                                 std::span<const double> mass_diag, double u_infinity) {
  StepDiagnostics d;
  d.mass = dot(mass_diag, u);
  double lo = u[0], hi = u[0];
  double dist2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
    const double e = u[i] - u_infinity;
    dist2 += mass_diag[i] * e * e;
  }
  d.min_u = lo;
  d.max_u = hi;
  d.l22_dist_to_equilibrium = std::sqrt(dist2);
  return d;
}

// Core of one implicit step on flat vectors. Returns the accepted state in
// ws.w and the diagnostics fields that the iteration determines.
StepDiagnostics step_flat(const CoupledGeometry& geom, const CoefficientModel& model,
                          const ForcingModel& forcing, std::span<const double> u_n,
                          double dt, const TimeStepConfig& cfg, StepWorkspace& ws) {
  const int n = geom.total_unknowns();
  const bool with_forcing = !forcing.all_zero();

  for (int i = 0; i < n; ++i) ws.rhs_mass[i] = ws.mass_diag[i] * u_n[i] / dt;
  ws.w.assign(u_n.begin(), u_n.end());

  StepDiagnostics diag;
  diag.dt = dt;
  for (int sweep = 1; sweep <= cfg.picard_max; ++sweep) {
    const StateVector w_state = StateVector::from_flat(geom, ws.w);
    SparseOperator B = assemble_operator(geom, model, w_state);
    for (int i = 0; i < n; ++i) ws.shifted_diag[i] = ws.mass_diag[i] / dt;
    B.add_diagonal(ws.shifted_diag);

    ws.rhs = ws.rhs_mass;
    if (with_forcing) {
      const std::vector<double> f = assemble_rhs(geom, forcing, w_state);
      for (int i = 0; i < n; ++i) ws.rhs[i] += f[i];
    }

    ws.x = ws.w;  // warm start from the previous iterate
    const PcgResult lin = pcg(B, ws.rhs, ws.x, cfg.linear_tol, 40 * n + 200);
    if (!lin.converged) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3e", lin.relative_residual);
      throw LinearSolveFailed(std::string("step: inner solve stalled at relative residual ") +
                              buf);
    }

    const double res = max_abs_diff(ws.x, ws.w);
    ws.w.swap(ws.x);
    diag.picard_iters = sweep;
    diag.last_fixed_point_residual = res;
    if (res < cfg.picard_tol) return diag;
  }
  throw PicardDiverged("step: fixed-point iteration did not converge in " +
                       std::to_string(cfg.picard_max) + " sweeps");
}

}  // namespace

std::pair<StateVector, StepDiagnostics> step_implicit(const CoupledGeometry& geom,
                                                      const CoefficientModel& model,
                                                      const ForcingModel& forcing,
                                                      const StateVector& u_n, double dt,
                                                      const TimeStepConfig& cfg,
                                                      double u_infinity) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  require_audit_ok(model, geom.mode);
  u_n.check_shape(geom);

  const int n = geom.total_unknowns();
  StepWorkspace ws;
  ws.mass_diag = lumped_measures(geom).concatenated();
  ws.shifted_diag.resize(n);
  ws.rhs_mass.resize(n);
  ws.rhs.resize(n);
  ws.w.resize(n);
  ws.x.resize(n);

  const std::vector<double> u_flat = u_n.flat();
  StepDiagnostics diag = step_flat(geom, model, forcing, u_flat, dt, cfg, ws);
  StepDiagnostics full = make_diagnostics(ws.w, ws.mass_diag, u_infinity);
  full.t = dt;
  full.dt = dt;
  full.picard_iters = diag.picard_iters;
  full.last_fixed_point_residual = diag.last_fixed_point_residual;
  return {StateVector::from_flat(geom, ws.w), full};
}

std::pair<StateVector, StepDiagnostics> step_implicit(const CoupledGeometry& geom,
                                                      const CoefficientModel& model,
                                                      const ForcingModel& forcing,
                                                      const StateVector& u_n, double dt,
                                                      const TimeStepConfig& cfg) {
  const Measures meas = lumped_measures(geom);
  const std::vector<double> w = meas.concatenated();
  const std::vector<double> u = u_n.flat();
  const double u_inf = dot(w, u) / meas.V;
  return step_implicit(geom, model, forcing, u_n, dt, cfg, u_inf);
}

SimulationTrace run(const CoupledGeometry& geom, const CoefficientModel& model,
                    const ForcingModel& forcing, const StateVector& u0,
                    const TimeStepConfig& cfg) {
  cfg.validate();
  require_audit_ok(model, geom.mode);
  u0.check_shape(geom);

  const int n = geom.total_unknowns();
  const Measures meas = lumped_measures(geom);

  StepWorkspace ws;
  ws.mass_diag = meas.concatenated();
  ws.shifted_diag.resize(n);
  ws.rhs_mass.resize(n);
  ws.rhs.resize(n);
  ws.x.resize(n);

  std::vector<double> u = u0.flat();
  const double u_inf = dot(ws.mass_diag, u) / meas.V;
  const double dt_min = cfg.resolved_dt_min();

  SimulationTrace trace;
  trace.u_infinity = u_inf;
  trace.times.push_back(0.0);
  trace.snapshots.push_back(u0);

  double t = 0.0;
  double dt_current = cfg.dt;
  int step_index = 0;
  const double t_tail = 1e-12 * cfg.t_end;

  while (t < cfg.t_end - t_tail) {
    StepDiagnostics diag;
    bool done = false;
    while (!done) {
      const double dt_try = std::min(dt_current, cfg.t_end - t);
      try {
        diag = step_flat(geom, model, forcing, u, dt_try, cfg, ws);
        done = true;
      } catch (const PicardDiverged&) {
        dt_current = 0.5 * dt_try;  // halving persists for the rest of the run
        if (dt_current < dt_min)
          throw StepSizeUnderflow(
              "run: step size fell below dt_min without fixed-point convergence");
      }
    }
    u = ws.w;
    t += diag.dt;
    ++step_index;

    StepDiagnostics full = make_diagnostics(u, ws.mass_diag, u_inf);
    full.t = t;
    full.dt = diag.dt;
    full.picard_iters = diag.picard_iters;
    full.last_fixed_point_residual = diag.last_fixed_point_residual;
    trace.diagnostics.push_back(full);

    if (step_index % cfg.snapshot_every == 0 || t >= cfg.t_end - t_tail) {
      trace.times.push_back(t);
      trace.snapshots.push_back(StateVector::from_flat(geom, u));
    }
  }

  trace.final_state = StateVector::from_flat(geom, u);
  trace.t_final = t;
  return trace;
}

}  // namespace bulkface
