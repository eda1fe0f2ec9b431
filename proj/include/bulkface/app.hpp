#pragma once

#include <string>

#include "bulkface/config.hpp"
#include "bulkface/csv.hpp"
#include "bulkface/timestepper.hpp"

namespace bulkface {

// Everything built from a config short of running: geometry, initial state,
// resolved clamp window, and the final coefficient model (for an onsager
// block, the transformed state model).
struct PreparedRun {
  RunConfig resolved;  // clamp made explicit; echo-ready
  CoupledGeometry geom;
  Measures measures;
  CoefficientModel model;
  ForcingModel forcing;
  StateVector u0;
};

StateVector build_initial_state(const CoupledGeometry& geom, const InitialSpec& initial);

PreparedRun prepare_run(const RunConfig& cfg);

struct RunArtifacts {
  PreparedRun prep;
  SimulationTrace trace;
};

RunArtifacts run_from_config(const RunConfig& cfg);

// Writes the resolved config echo, the diagnostics CSV, and the snapshot
// CSVs into out_dir with the configured prefix.
void write_run_outputs(const RunArtifacts& artifacts, const std::string& out_dir,
                       bool dump_mesh, bool dump_operator);

}  // namespace bulkface
