#include "bulkface/app.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bulkface/assembly.hpp"
#include "bulkface/errors.hpp"

namespace bulkface {

StateVector build_initial_state(const CoupledGeometry& geom, const InitialSpec& initial) {
  StateVector u;
  switch (initial.kind) {
    case InitialSpec::Kind::Constant:
      return StateVector::constant(geom, initial.value);
    case InitialSpec::Kind::Piecewise:
      u.plus.assign(geom.n_plus(), initial.value_plus);
      u.minus.assign(geom.n_minus(), initial.value_minus);
      u.gamma.assign(geom.n_gamma(), initial.value_gamma);
      return u;
    case InitialSpec::Kind::Expression: {
      const Expression& e = initial.expression;
      u.plus.reserve(geom.n_plus());
      for (const auto& p : geom.plus.vertices) u.plus.push_back(e.eval(p[0], p[1]));
      if (geom.has_minus()) {
        u.minus.reserve(geom.n_minus());
        for (const auto& p : geom.minus->vertices) u.minus.push_back(e.eval(p[0], p[1]));
      }
      if (geom.has_interface()) {
        u.gamma.reserve(geom.n_gamma());
        for (double x : geom.interface->nodes) u.gamma.push_back(e.eval(x, 0.0));
      }
      return u;
    }
  }
  return u;
}

PreparedRun prepare_run(const RunConfig& cfg) {
  PreparedRun prep;
  prep.resolved = cfg;
  prep.geom = build_rectangle_geometry(cfg.nx, cfg.ny, cfg.mode);
  prep.geom.validate();
  prep.measures = lumped_measures(prep.geom);
  prep.u0 = build_initial_state(prep.geom, cfg.initial);
  prep.u0.check_shape(prep.geom);

  const ClampBounds bounds =
      resolve_clamp(cfg, prep.u0.min_value(), prep.u0.max_value());
  prep.resolved.clamp = ClampSpec{false, bounds.l, bounds.L};

  if (cfg.model) {
    prep.model = *cfg.model;
    prep.model.clamp = bounds;
  } else {
    prep.model = onsager_to_u_model(*cfg.onsager, bounds);
  }
  prep.forcing = cfg.forcing;
  return prep;
}

RunArtifacts run_from_config(const RunConfig& cfg) {
  RunArtifacts art;
  art.prep = prepare_run(cfg);
  art.trace = run(art.prep.geom, art.prep.model, art.prep.forcing, art.prep.u0,
                  art.prep.resolved.time);
  return art;
}

void write_run_outputs(const RunArtifacts& artifacts, const std::string& out_dir,
                       bool dump_mesh, bool dump_operator) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string prefix = out_dir + "/" + artifacts.prep.resolved.output.prefix;

  {
    std::ofstream os(prefix + "_config.json", std::ios::binary);
    if (!os) throw Error("cannot open output file: " + prefix + "_config.json");
    os << write_config(artifacts.prep.resolved);
  }

  write_diagnostics_csv(prefix + "_diagnostics.csv", artifacts.prep.geom, artifacts.trace);

  char name[64];
  for (std::size_t s = 0; s < artifacts.trace.snapshots.size(); ++s) {
    std::snprintf(name, sizeof(name), "_state_%06zu.csv", s);
    write_snapshot_csv(prefix + name, artifacts.prep.geom, artifacts.trace.snapshots[s]);
  }

  if (dump_mesh) write_mesh_csv(prefix + "_mesh.csv", artifacts.prep.geom);
  if (dump_operator) {
    const SparseOperator A =
        assemble_operator(artifacts.prep.geom, artifacts.prep.model, artifacts.prep.u0);
    std::ofstream os(prefix + "_operator.txt", std::ios::binary);
    if (!os) throw Error("cannot open output file: " + prefix + "_operator.txt");
    A.write_coordinate(os);
  }
}

}  // namespace bulkface
