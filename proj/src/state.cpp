#include "bulkface/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bulkface/errors.hpp"

namespace bulkface {

StateVector StateVector::constant(const CoupledGeometry& geom, double c) {
  StateVector u;
  u.plus.assign(geom.n_plus(), c);
  u.minus.assign(geom.n_minus(), c);
  u.gamma.assign(geom.n_gamma(), c);
  return u;
}

StateVector StateVector::from_flat(const CoupledGeometry& geom,
                                   std::span<const double> flat) {
  if (static_cast<int>(flat.size()) != geom.total_unknowns())
    throw Error("state: flat vector length does not match the geometry");
  StateVector u;
  u.plus.assign(flat.begin(), flat.begin() + geom.n_plus());
  u.minus.assign(flat.begin() + geom.offset_minus(),
                 flat.begin() + geom.offset_minus() + geom.n_minus());
  u.gamma.assign(flat.begin() + geom.offset_gamma(), flat.end());
  return u;
}

std::vector<double> StateVector::flat() const {
  std::vector<double> v;
  v.reserve(plus.size() + minus.size() + gamma.size());
  v.insert(v.end(), plus.begin(), plus.end());
  v.insert(v.end(), minus.begin(), minus.end());
  v.insert(v.end(), gamma.begin(), gamma.end());
  return v;
}

double StateVector::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* f : {&plus, &minus, &gamma})
    for (double v : *f) m = std::min(m, v);
  return m;
}

double StateVector::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto* f : {&plus, &minus, &gamma})
    for (double v : *f) m = std::max(m, v);
  return m;
}

void StateVector::check_shape(const CoupledGeometry& geom) const {
  if (static_cast<int>(plus.size()) != geom.n_plus() ||
      static_cast<int>(minus.size()) != geom.n_minus() ||
      static_cast<int>(gamma.size()) != geom.n_gamma())
    throw Error("state: field lengths do not match the geometry");
  for (const auto* f : {&plus, &minus, &gamma})
    for (double v : *f)
      if (!std::isfinite(v)) throw Error("state: non-finite entry");
}

}  // namespace bulkface
