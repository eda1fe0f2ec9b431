// P1 discretization of the coupled diffusion forms with lumped quadrature.
//
// Conventions that the time stepping and the maximum-principle arguments rely
// on:
//  - coefficients are evaluated once per element (bulk: element mean of the
//    clamped state; interface: segment mean of the clamped trace triple),
//    which keeps every assembled block symmetric and keeps the bulk blocks
//    M-matrices on the nonobtuse meshes;
//  - the transmission term is a per-node weighted 3-point graph Laplacian in
//    (u+, u-, uG), so its kernel is exactly the equal-trace states;
//  - element contributions are computed into fixed slots (parallel loop) and
//    merged in element order, so assembly is reproducible for any thread count.

#include "bulkface/assembly.hpp"

#include <array>
#include <cmath>

#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"

namespace bulkface {

namespace {

void local_stiffness(const std::array<double, 2>& p0, const std::array<double, 2>& p1,
                     const std::array<double, 2>& p2, double k,
                     std::array<std::array<double, 3>, 3>& out) {
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const double area = 0.5 * det;
  const std::array<std::array<double, 2>, 3> grad{{
      {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
      {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
      {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det},
  }};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[i][j] = k * area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
}

void emit_bulk_stiffness(const BulkMesh& mesh, const CoefficientModel& model,
                         FieldId field, const std::vector<double>& w, int offset,
                         std::vector<Triplet>& out) {
  const int ntri = static_cast<int>(mesh.triangles.size());
  const std::size_t base = out.size();
  out.resize(base + static_cast<std::size_t>(ntri) * 9);
  const int nt = thread_count();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && ntri > 512)
  for (int t = 0; t < ntri; ++t) {
    const auto& tri = mesh.triangles[t];
    const double mean = (clamp_value(w[tri[0]], model.clamp) +
                         clamp_value(w[tri[1]], model.clamp) +
                         clamp_value(w[tri[2]], model.clamp)) / 3.0;
    const double k = model.k_value(field, mean);
    std::array<std::array<double, 3>, 3> loc;
    local_stiffness(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                    k, loc);
    Triplet* slot = out.data() + base + static_cast<std::size_t>(t) * 9;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        slot[3 * i + j] = {offset + tri[i], offset + tri[j], loc[i][j]};
  }
}

TraceTriple trace_triple_at(const CoupledGeometry& geom, const CoefficientModel& model,
                            const StateVector& w, int node) {
  TraceTriple t;
  t.plus = clamp_value(w.plus[geom.trace_plus[node]], model.clamp);
  t.gamma = clamp_value(w.gamma[node], model.clamp);
  t.minus = geom.has_minus() ? clamp_value(w.minus[geom.trace_minus[node]], model.clamp)
                             : t.gamma;
  return t;
}

void emit_interface_stiffness(const CoupledGeometry& geom, const CoefficientModel& model,
                              const StateVector& w, std::vector<Triplet>& out) {
  const InterfaceMesh& ifc = *geom.interface;
  const int off = geom.offset_gamma();
  for (const auto& seg : ifc.segments) {
    const double h = ifc.nodes[seg[1]] - ifc.nodes[seg[0]];
    const TraceTriple a = trace_triple_at(geom, model, w, seg[0]);
    const TraceTriple b = trace_triple_at(geom, model, w, seg[1]);
    const TraceTriple mean{0.5 * (a.plus + b.plus), 0.5 * (a.minus + b.minus),
                           0.5 * (a.gamma + b.gamma)};
    const double k = model.k_gamma_value(mean) / h;
    out.push_back({off + seg[0], off + seg[0], k});
    out.push_back({off + seg[1], off + seg[1], k});
    out.push_back({off + seg[0], off + seg[1], -k});
    out.push_back({off + seg[1], off + seg[0], -k});
  }
}

void emit_pair_coupling(int a, int b, double coeff, std::vector<Triplet>& out) {
  if (coeff == 0.0) return;
  out.push_back({a, a, coeff});
  out.push_back({b, b, coeff});
  out.push_back({a, b, -coeff});
  out.push_back({b, a, -coeff});
}

void emit_transmission(const CoupledGeometry& geom, const CoefficientModel& model,
                       const StateVector& w, const Measures& meas,
                       std::vector<Triplet>& out) {
  const int n_nodes = geom.n_gamma();
  for (int j = 0; j < n_nodes; ++j) {
    const double wj = meas.lumped_interface[j];
    const TraceTriple t = trace_triple_at(geom, model, w, j);
    const TransmissionValues m = model.m_values(t);
    const int P = geom.offset_plus() + geom.trace_plus[j];
    const int G = geom.offset_gamma() + j;
    if (geom.mode == GeometryMode::Full) {
      const int M = geom.offset_minus() + geom.trace_minus[j];
      emit_pair_coupling(P, M, wj * m.gamma, out);
      emit_pair_coupling(P, G, wj * m.plus, out);
      emit_pair_coupling(M, G, wj * m.minus, out);
    } else {
      // upper_only: m- and mG act on an absent field and are forced to zero
      emit_pair_coupling(P, G, wj * m.plus, out);
    }
  }
}

}  // namespace

SparseOperator assemble_mass(const CoupledGeometry& geom) {
  return SparseOperator::diagonal(lumped_measures(geom).concatenated());
}

SparseOperator assemble_stiffness(const CoupledGeometry& geom,
                                  const CoefficientModel& model, const StateVector& w) {
  require_audit_ok(model, geom.mode);
  w.check_shape(geom);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(geom.total_unknowns()) * 10);
  emit_bulk_stiffness(geom.plus, model, FieldId::Plus, w.plus, geom.offset_plus(), entries);
  if (geom.has_minus())
    emit_bulk_stiffness(*geom.minus, model, FieldId::Minus, w.minus, geom.offset_minus(),
                        entries);
  if (geom.has_interface()) emit_interface_stiffness(geom, model, w, entries);
  return SparseOperator::from_triplets(geom.total_unknowns(), std::move(entries), true);
}

SparseOperator assemble_transmission(const CoupledGeometry& geom,
                                     const CoefficientModel& model, const StateVector& w) {
  if (!geom.has_interface())
    throw ModeError("assemble_transmission: no interface in bulk_only mode");
  w.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(geom.n_gamma()) * 12);
  emit_transmission(geom, model, w, meas, entries);
  return SparseOperator::from_triplets(geom.total_unknowns(), std::move(entries), true);
}

SparseOperator assemble_operator(const CoupledGeometry& geom,
                                 const CoefficientModel& model, const StateVector& w) {
  require_audit_ok(model, geom.mode);
  w.check_shape(geom);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(geom.total_unknowns()) * 12);
  emit_bulk_stiffness(geom.plus, model, FieldId::Plus, w.plus, geom.offset_plus(), entries);
  if (geom.has_minus())
    emit_bulk_stiffness(*geom.minus, model, FieldId::Minus, w.minus, geom.offset_minus(),
                        entries);
  if (geom.has_interface()) {
    emit_interface_stiffness(geom, model, w, entries);
    const Measures meas = lumped_measures(geom);
    emit_transmission(geom, model, w, meas, entries);
  }
  return SparseOperator::from_triplets(geom.total_unknowns(), std::move(entries), true);
}

std::vector<double> assemble_rhs(const CoupledGeometry& geom, const ForcingModel& forcing,
                                 const StateVector& w) {
  w.check_shape(geom);
  const Measures meas = lumped_measures(geom);
  std::vector<double> rhs(static_cast<std::size_t>(geom.total_unknowns()), 0.0);

  auto add_bulk = [&](const BulkMesh& mesh, const std::vector<double>& wf,
                      const std::vector<double>& lumped, const ForcingLaw& f,
                      const ForcingLaw& h, int offset) {
    if (!f.is_zero())
      for (int v = 0; v < mesh.vertex_count(); ++v) rhs[offset + v] += lumped[v] * f(wf[v]);
    if (!h.is_zero())
      for (const auto& be : mesh.boundary_edges) {
        if (be.tag != EdgeTag::Outer) continue;
        const auto& pa = mesh.vertices[be.a];
        const auto& pb = mesh.vertices[be.b];
        const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
        rhs[offset + be.a] += 0.5 * len * h(wf[be.a]);
        rhs[offset + be.b] += 0.5 * len * h(wf[be.b]);
      }
  };
  add_bulk(geom.plus, w.plus, meas.lumped_plus, forcing.f_plus, forcing.h_plus,
           geom.offset_plus());
  if (geom.has_minus())
    add_bulk(*geom.minus, w.minus, meas.lumped_minus, forcing.f_minus, forcing.h_minus,
             geom.offset_minus());

  if (geom.has_interface()) {
    const int n_nodes = geom.n_gamma();
    for (int j = 0; j < n_nodes; ++j) {
      const double wj = meas.lumped_interface[j];
      if (!forcing.g_plus.is_zero()) {
        const int P = geom.offset_plus() + geom.trace_plus[j];
        rhs[P] += wj * forcing.g_plus(w.plus[geom.trace_plus[j]]);
      }
      if (geom.has_minus() && !forcing.g_minus.is_zero()) {
        const int M = geom.offset_minus() + geom.trace_minus[j];
        rhs[M] += wj * forcing.g_minus(w.minus[geom.trace_minus[j]]);
      }
      if (!forcing.f_gamma.is_zero())
        rhs[geom.offset_gamma() + j] += wj * forcing.f_gamma(w.gamma[j]);
    }
    if (!forcing.h_gamma.is_zero())
      for (int e : geom.interface->endpoint_nodes)
        rhs[geom.offset_gamma() + e] += forcing.h_gamma(w.gamma[e]);
  }
  return rhs;
}

}  // namespace bulkface
