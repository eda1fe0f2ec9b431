#pragma once

#include <string>

#include "bulkface/analysis.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/state.hpp"
#include "bulkface/timestepper.hpp"

namespace bulkface {

// Floats are printed with 17 significant digits so every value round-trips
// exactly; identical runs produce byte-identical files.
std::string format_float(double v);

// Schema: t,mass,min_u,max_u,l22_dist,picard_iters,residual
// First row is the initial state at t = 0, then one row per completed step.
void write_diagnostics_csv(const std::string& path, const CoupledGeometry& geom,
                           const SimulationTrace& trace);

// Schema: domain,index,x,y,value
void write_snapshot_csv(const std::string& path, const CoupledGeometry& geom,
                        const StateVector& state);

// Schema: domain,index,x,y
void write_mesh_csv(const std::string& path, const CoupledGeometry& geom);

void write_poincare_csv(const std::string& path, const PoincareReport& report);

void write_decay_csv(const std::string& path, const DecayFit& fit, bool bound_ok);

}  // namespace bulkface
