// Verifiable conclusions about the discrete flow: conserved mass and the
// uniform equilibrium, exponential-decay fitting, the coupled Poincare
// constant as a generalized eigenvalue, maximum-principle auditing, and the
// entropy/dissipation functionals of the temperature formulation.

#include "bulkface/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bulkface/assembly.hpp"
#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"
#include "bulkface/solver.hpp"

namespace bulkface {

double total_mass(const CoupledGeometry& geom, const StateVector& u) {
  u.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  double m = 0.0;
  for (std::size_t i = 0; i < u.plus.size(); ++i) m += meas.lumped_plus[i] * u.plus[i];
  for (std::size_t i = 0; i < u.minus.size(); ++i) m += meas.lumped_minus[i] * u.minus[i];
  for (std::size_t i = 0; i < u.gamma.size(); ++i)
    m += meas.lumped_interface[i] * u.gamma[i];
  return m;
}

EquilibriumReport equilibrium(const CoupledGeometry& geom, const StateVector& u0) {
  EquilibriumReport rep;
  rep.mass = total_mass(geom, u0);
  rep.V = lumped_measures(geom).V;
  rep.u_infinity = rep.mass / rep.V;
  return rep;
}

double l22_distance(const CoupledGeometry& geom, const StateVector& u, double c) {
  u.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  double s = 0.0;
  auto acc = [&s, c](const std::vector<double>& w, const std::vector<double>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double e = f[i] - c;
      s += w[i] * e * e;
    }
  };
  acc(meas.lumped_plus, u.plus);
  acc(meas.lumped_minus, u.minus);
  acc(meas.lumped_interface, u.gamma);
  return std::sqrt(s);
}

DecayFit fit_decay_rate(const CoupledGeometry& geom, const SimulationTrace& trace,
                        double u_infinity) {
  if (trace.snapshots.empty()) throw InsufficientDecayData("decay fit: empty trace");
  const double u0_norm = l22_distance(geom, trace.snapshots.front(), 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  // stay clear of round-off noise near the equilibrium
  const double floor = std::max(1e3 * eps * u0_norm, 10.0 * eps);

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    const double d = l22_distance(geom, trace.snapshots[i], u_infinity);
    if (d <= floor) break;  // distances past this point are numerical noise
    ts.push_back(trace.times[i]);
    logs.push_back(std::log(d));
  }
  if (ts.size() < 5)
    throw InsufficientDecayData("decay fit: fewer than 5 snapshots above the noise floor");

  const std::size_t n = ts.size();
  double st = 0.0, sl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += ts[i];
    sl += logs[i];
  }
  const double tbar = st / n, lbar = sl / n;
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (ts[i] - tbar) * (ts[i] - tbar);
    stl += (ts[i] - tbar) * (logs[i] - lbar);
  }
  if (stt == 0.0) throw InsufficientDecayData("decay fit: degenerate time window");
  const double slope = stl / stt;
  const double intercept = lbar - slope * tbar;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = intercept + slope * ts[i];
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - lbar) * (logs[i] - lbar);
  }

  DecayFit out;
  out.delta_hat = -slope;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.window_start = ts.front();
  out.window_end = ts.back();
  out.points = static_cast<int>(n);
  return out;
}

SparseOperator assemble_unit_operator(const CoupledGeometry& geom) {
  CoefficientModel unit;
  unit.k_plus = {ScalarLawKind::Constant, 1.0, 1.0};
  unit.k_minus = unit.k_plus;
  unit.k_gamma = unit.k_plus;
  unit.clamp = {0.0, 1.0};
  switch (geom.mode) {
    case GeometryMode::Full:
      unit.m_plus = {TransmissionKind::Constant, 1.0, 1.0};
      unit.m_minus = unit.m_plus;
      unit.m_gamma = unit.m_plus;
      break;
    case GeometryMode::UpperOnly:
      unit.m_plus = {TransmissionKind::Constant, 1.0, 1.0};
      break;
    case GeometryMode::BulkOnly:
      break;
  }
  return assemble_operator(geom, unit, StateVector::constant(geom, 0.5));
}

PoincareReport poincare_constant(const CoupledGeometry& geom) {
  const SparseOperator A = assemble_unit_operator(geom);
  const std::vector<double> mass = lumped_measures(geom).concatenated();
  const EigenResult eig = smallest_nonzero_eigenvalue(A, mass, 1e-9, 10000);

  PoincareReport rep;
  rep.lambda1 = eig.lambda;
  rep.C = 1.0 / eig.lambda;
  rep.residual = eig.residual;
  rep.iterations = eig.iterations;
  rep.eigenvector = eig.eigenvector;
  return rep;
}

MaximumPrincipleReport check_maximum_principle(const SimulationTrace& trace, double l0,
                                               double L0) {
  MaximumPrincipleReport rep;
  auto scan = [&rep, l0, L0](double lo, double hi) {
    rep.overshoot = std::max(rep.overshoot, hi - L0);
    rep.undershoot = std::max(rep.undershoot, l0 - lo);
  };
  for (const StepDiagnostics& d : trace.diagnostics) scan(d.min_u, d.max_u);
  for (const StateVector& s : trace.snapshots) scan(s.min_value(), s.max_value());
  rep.overshoot = std::max(rep.overshoot, 0.0);
  rep.undershoot = std::max(rep.undershoot, 0.0);
  rep.pass = rep.overshoot <= 1e-10 && rep.undershoot <= 1e-10;
  return rep;
}

double entropy(const CoupledGeometry& geom, const OnsagerModel& om,
               const StateVector& theta) {
  theta.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  double s = 0.0;
  auto acc = [&s](const std::vector<double>& w, const std::vector<double>& f, double c) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!(f[i] > 0.0)) throw PositivityError("entropy: nonpositive temperature entry");
      s += c * w[i] * std::log(f[i]);
    }
  };
  acc(meas.lumped_plus, theta.plus, om.c_plus);
  acc(meas.lumped_minus, theta.minus, om.c_minus);
  acc(meas.lumped_interface, theta.gamma, om.c_gamma);
  return s;
}

double dissipation_rate(const CoupledGeometry& geom, const CoefficientModel& model,
                        const StateVector& u) {
  const SparseOperator A = assemble_operator(geom, model, u);
  const std::vector<double> flat = u.flat();
  return A.quadratic_form(flat);
}

EntropyTrace entropy_trace(const CoupledGeometry& geom, const OnsagerModel& om,
                           const SimulationTrace& theta_trace) {
  if (theta_trace.snapshots.empty()) throw Error("entropy trace: empty trace");
  const StateVector& theta0 = theta_trace.snapshots.front();
  const double lo = theta0.min_value();
  if (!(lo > 0.0)) throw PositivityError("entropy trace: nonpositive initial temperature");
  const ClampBounds bounds{0.5 * lo, theta0.max_value() + 1.0};
  const CoefficientModel model = onsager_to_u_model(om, bounds);

  EntropyTrace out;
  out.times = theta_trace.times;
  out.entropy_values.reserve(theta_trace.snapshots.size());
  out.dissipation_values.reserve(theta_trace.snapshots.size());
  for (const StateVector& snap : theta_trace.snapshots) {
    out.entropy_values.push_back(entropy(geom, om, snap));
    out.dissipation_values.push_back(dissipation_rate(geom, model, snap));
  }
  return out;
}

StabilityReport stability_margin(const CoupledGeometry& geom, const StateVector& u0,
                                 double v_infinity) {
  u0.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  const EquilibriumReport eq = equilibrium(geom, u0);
  double l11 = 0.0;
  auto acc = [&l11, v_infinity](const std::vector<double>& w, const std::vector<double>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) l11 += w[i] * std::abs(f[i] - v_infinity);
  };
  acc(meas.lumped_plus, u0.plus);
  acc(meas.lumped_minus, u0.minus);
  acc(meas.lumped_interface, u0.gamma);

  StabilityReport rep;
  rep.left = std::abs(eq.u_infinity - v_infinity);
  rep.right = l11 / meas.V;
  rep.ok = rep.left <= rep.right + 1e-12;
  return rep;
}

}  // namespace bulkface
