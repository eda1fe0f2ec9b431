#include "bulkface/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"

namespace bulkface {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: no platform newline surprises
  if (!os) throw Error("cannot open output file: " + path);
  return os;
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const CoupledGeometry& geom,
                           const SimulationTrace& trace) {
  std::ofstream os = open_out(path);
  os << "t,mass,min_u,max_u,l22_dist,picard_iters,residual\n";
  if (!trace.snapshots.empty()) {
    const StateVector& u0 = trace.snapshots.front();
    const Measures meas = lumped_measures(geom);
    const std::vector<double> w = meas.concatenated();
    const std::vector<double> u = u0.flat();
    double dist2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = u[i] - trace.u_infinity;
      dist2 += w[i] * e * e;
    }
    os << format_float(0.0) << ',' << format_float(dot(w, u)) << ','
       << format_float(u0.min_value()) << ',' << format_float(u0.max_value()) << ','
       << format_float(std::sqrt(dist2)) << ",0," << format_float(0.0) << '\n';
  }
  for (const StepDiagnostics& d : trace.diagnostics) {
    os << format_float(d.t) << ',' << format_float(d.mass) << ','
       << format_float(d.min_u) << ',' << format_float(d.max_u) << ','
       << format_float(d.l22_dist_to_equilibrium) << ',' << d.picard_iters << ','
       << format_float(d.last_fixed_point_residual) << '\n';
  }
}

namespace {

void write_field_rows(std::ofstream& os, const char* domain,
                      const std::vector<std::array<double, 2>>& coords,
                      const std::vector<double>* values) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    os << domain << ',' << i << ',' << format_float(coords[i][0]) << ','
       << format_float(coords[i][1]);
    if (values) os << ',' << format_float((*values)[i]);
    os << '\n';
  }
}

std::vector<std::array<double, 2>> interface_coords(const CoupledGeometry& geom) {
  std::vector<std::array<double, 2>> c;
  if (geom.has_interface())
    for (double x : geom.interface->nodes) c.push_back({x, 0.0});
  return c;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const CoupledGeometry& geom,
                        const StateVector& state) {
  std::ofstream os = open_out(path);
  os << "domain,index,x,y,value\n";
  write_field_rows(os, "plus", geom.plus.vertices, &state.plus);
  if (geom.has_minus()) write_field_rows(os, "minus", geom.minus->vertices, &state.minus);
  if (geom.has_interface()) {
    const auto coords = interface_coords(geom);
    write_field_rows(os, "gamma", coords, &state.gamma);
  }
}

void write_mesh_csv(const std::string& path, const CoupledGeometry& geom) {
  std::ofstream os = open_out(path);
  os << "domain,index,x,y\n";
  write_field_rows(os, "plus", geom.plus.vertices, nullptr);
  if (geom.has_minus()) write_field_rows(os, "minus", geom.minus->vertices, nullptr);
  if (geom.has_interface()) {
    const auto coords = interface_coords(geom);
    write_field_rows(os, "gamma", coords, nullptr);
  }
}

void write_poincare_csv(const std::string& path, const PoincareReport& report) {
  std::ofstream os = open_out(path);
  os << "lambda1,C,residual,iterations\n";
  os << format_float(report.lambda1) << ',' << format_float(report.C) << ','
     << format_float(report.residual) << ',' << report.iterations << '\n';
}

void write_decay_csv(const std::string& path, const DecayFit& fit, bool bound_ok) {
  std::ofstream os = open_out(path);
  os << "delta_hat,r_squared,window_start,window_end,points,bound_ok\n";
  os << format_float(fit.delta_hat) << ',' << format_float(fit.r_squared) << ','
     << format_float(fit.window_start) << ',' << format_float(fit.window_end) << ','
     << fit.points << ',' << (bound_ok ? 1 : 0) << '\n';
}

}  // namespace bulkface
