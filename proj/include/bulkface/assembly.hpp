#pragma once

#include <vector>

#include "bulkface/coefficients.hpp"
#include "bulkface/geometry.hpp"
#include "bulkface/sparse.hpp"
#include "bulkface/state.hpp"

namespace bulkface {

// Lumped (diagonal) mass operator; entries are the lumped measures, so the
// trace of the matrix is V.
SparseOperator assemble_mass(const CoupledGeometry& geom);

// P1 stiffness of the three fields with coefficients frozen at w: per-element
// bulk coefficient k(element mean of the clamped state), per-segment interface
// coefficient from the segment-mean clamped trace triple. Block-diagonal,
// symmetric PSD, constants in the kernel.
SparseOperator assemble_stiffness(const CoupledGeometry& geom,
                                  const CoefficientModel& model, const StateVector& w);

// Interface exchange term: per interface node, the lumped length times the
// 3x3 transmission matrix evaluated at the clamped trace triple of w, coupling
// (u+ at trace, u- at trace, uG). Reduces to the single m+ pair coupling in
// upper_only mode. Symmetric PSD, vanishes on states with equal traces.
SparseOperator assemble_transmission(const CoupledGeometry& geom,
                                     const CoefficientModel& model, const StateVector& w);

// Stiffness plus transmission, the full frozen-coefficient operator.
SparseOperator assemble_operator(const CoupledGeometry& geom,
                                 const CoefficientModel& model, const StateVector& w);

// Lumped load vector: volume forcing f per node, surface forcing g on the
// interface-adjacent bulk rows, Neumann data h on the outer boundary rows and
// at the two interface endpoints.
std::vector<double> assemble_rhs(const CoupledGeometry& geom, const ForcingModel& forcing,
                                 const StateVector& w);

}  // namespace bulkface
