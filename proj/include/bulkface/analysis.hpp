#pragma once

#include <vector>

#include "bulkface/coefficients.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/state.hpp"
#include "bulkface/timestepper.hpp"

namespace bulkface {

struct EquilibriumReport {
  double mass = 0.0;
  double V = 0.0;
  double u_infinity = 0.0;  // mass / V
};

struct DecayFit {
  double delta_hat = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  int points = 0;
};

struct PoincareReport {
  double lambda1 = 0.0;
  double C = 0.0;  // 1 / lambda1
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> eigenvector;
};

struct MaximumPrincipleReport {
  double overshoot = 0.0;   // max over time of (max_u - L0)+
  double undershoot = 0.0;  // max over time of (l0 - min_u)+
  bool pass = false;        // both within 1e-10
};

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> entropy_values;
  std::vector<double> dissipation_values;
};

struct StabilityReport {
  double left = 0.0;   // |u_inf - v_inf|
  double right = 0.0;  // (1/V) |u0 - v_inf|_{L11}
  bool ok = false;     // left <= right + 1e-12
};

// Lumped total mass over all fields present in the mode.
double total_mass(const CoupledGeometry& geom, const StateVector& u);

EquilibriumReport equilibrium(const CoupledGeometry& geom, const StateVector& u0);

// Lumped distance sqrt(sum_i w_i (u_i - c)^2).
double l22_distance(const CoupledGeometry& geom, const StateVector& u, double c);

// Least-squares slope of log(distance to u_infinity) against time over the
// snapshots whose distance sits above the round-off floor
// (1000 * eps * |u0|). Throws InsufficientDecayData below 5 usable points.
DecayFit fit_decay_rate(const CoupledGeometry& geom, const SimulationTrace& trace,
                        double u_infinity);

// Unit-coefficient operator (k = 1, m = 1 on the couplings present in the
// mode): its quadratic form is the coefficient-free right side of the coupled
// Poincare inequality.
SparseOperator assemble_unit_operator(const CoupledGeometry& geom);

// Sharp constant of the discrete coupled Poincare inequality
//   |u - u_inf|^2 <= C (|grad u|^2 + interface jump terms)
// computed from the smallest nonzero eigenvalue of the unit-coefficient
// operator against the lumped mass. In bulk_only mode this degenerates to the
// classical Neumann constant.
PoincareReport poincare_constant(const CoupledGeometry& geom);

// Scans per-step diagnostics and snapshots for violations of the initial
// bounds [l0, L0]; pass means both sides stay within 1e-10.
MaximumPrincipleReport check_maximum_principle(const SimulationTrace& trace, double l0,
                                               double L0);

// Total entropy sum_fields int c log(theta) with lumped quadrature. Throws
// PositivityError on a nonpositive temperature.
double entropy(const CoupledGeometry& geom, const OnsagerModel& om,
               const StateVector& theta);

// Instantaneous dissipation u . A(u) u of the frozen-coefficient operator.
double dissipation_rate(const CoupledGeometry& geom, const CoefficientModel& model,
                        const StateVector& u);

// Entropy and dissipation per snapshot of a temperature trace; the
// dissipation uses the state model obtained from the temperature laws.
EntropyTrace entropy_trace(const CoupledGeometry& geom, const OnsagerModel& om,
                           const SimulationTrace& theta_trace);

// Checks |u_inf - v_inf| <= (1/V) |u0 - v_inf|_{L11} + 1e-12 and returns both
// sides.
StabilityReport stability_margin(const CoupledGeometry& geom, const StateVector& u0,
                                 double v_infinity);

}  // namespace bulkface
