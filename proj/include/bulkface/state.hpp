#pragma once

#include <span>
#include <vector>

#include "bulkface/geometry.hpp"

namespace bulkface {

// Nodal values of (u+, u-, uG) on the three meshes. Fields absent from the
// geometry mode stay empty.
struct StateVector {
  std::vector<double> plus;
  std::vector<double> minus;
  std::vector<double> gamma;

  static StateVector constant(const CoupledGeometry& geom, double c);
  static StateVector from_flat(const CoupledGeometry& geom, std::span<const double> flat);

  std::vector<double> flat() const;
  double min_value() const;
  double max_value() const;

  // Throws unless the field lengths match the geometry and every entry is finite.
  void check_shape(const CoupledGeometry& geom) const;
};

}  // namespace bulkface
