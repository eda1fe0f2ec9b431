#pragma once

#include <utility>
#include <vector>

#include "bulkface/assembly.hpp"
#include "bulkface/coefficients.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/state.hpp"

namespace bulkface {

struct TimeStepConfig {
  double dt = 0.01;
  double t_end = 1.0;
  double picard_tol = 1e-10;   // sup-norm fixed-point tolerance
  int picard_max = 50;
  double linear_tol = 1e-12;   // relative residual of the inner CG solve
  double dt_min = 0.0;         // 0 resolves to dt / 2^6
  int snapshot_every = 1;

  double resolved_dt_min() const { return dt_min > 0.0 ? dt_min : dt / 64.0; }
  void validate() const;
};

struct StepDiagnostics {
  double t = 0.0;
  double dt = 0.0;  // executed step size (records the halving schedule)
  int picard_iters = 0;
  double last_fixed_point_residual = 0.0;
  double mass = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double l22_dist_to_equilibrium = 0.0;
};

struct SimulationTrace {
  std::vector<double> times;           // snapshot times, starting at 0
  std::vector<StateVector> snapshots;  // states at the snapshot stride
  std::vector<StepDiagnostics> diagnostics;  // one entry per completed step
  StateVector final_state;
  double t_final = 0.0;
  double u_infinity = 0.0;  // mass(u0) / V
};

// One implicit Euler step of u' + A_u u = F(u). The quasilinear system is
// solved by the frozen-coefficient fixed-point iteration
//   w0 = u_n,  (M/dt + A(w_k)) w_{k+1} = M u_n / dt + F(w_k)
// until |w_{k+1} - w_k|_inf < picard_tol. Throws PicardDiverged past
// picard_max sweeps and LinearSolveFailed if an inner solve breaks down.
// u_infinity only feeds the distance diagnostic.
std::pair<StateVector, StepDiagnostics> step_implicit(const CoupledGeometry& geom,
                                                      const CoefficientModel& model,
                                                      const ForcingModel& forcing,
                                                      const StateVector& u_n, double dt,
                                                      const TimeStepConfig& cfg,
                                                      double u_infinity);

std::pair<StateVector, StepDiagnostics> step_implicit(const CoupledGeometry& geom,
                                                      const CoefficientModel& model,
                                                      const ForcingModel& forcing,
                                                      const StateVector& u_n, double dt,
                                                      const TimeStepConfig& cfg);

// Integrates to t_end. A step whose fixed-point iteration diverges is retried
// with half the step size (the reduction is kept for the rest of the run and
// recorded in the diagnostics); below dt_min the run fails with
// StepSizeUnderflow.
SimulationTrace run(const CoupledGeometry& geom, const CoefficientModel& model,
                    const ForcingModel& forcing, const StateVector& u0,
                    const TimeStepConfig& cfg);

}  // namespace bulkface
