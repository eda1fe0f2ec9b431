// Canonical coupled geometry: two unit rectangles stacked across the segment
// y = 0, 0 <= x <= 1, each split into structured right triangles. Right
// triangles obtained from rectangle cells are nonobtuse for every aspect
// ratio, which is what the discrete maximum principle needs from the mesh.

#include "bulkface/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bulkface/errors.hpp"

namespace bulkface {

namespace {

double signed_area(const std::array<double, 2>& p0, const std::array<double, 2>& p1,
                   const std::array<double, 2>& p2) {
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

BulkMesh build_bulk(int nx, int ny, BulkMesh::DomainTag tag, bool tag_interface) {
  BulkMesh m;
  m.domain_tag = tag;
  const double hx = 1.0 / nx;
  const double hy = 1.0 / ny;
  const double y0 = (tag == BulkMesh::DomainTag::Plus) ? 0.0 : -1.0;
  m.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({i * hx, y0 + j * hy});

  auto idx = [nx](int i, int j) { return j * (nx + 1) + i; };

  m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = idx(i, j), v10 = idx(i + 1, j);
      const int v01 = idx(i, j + 1), v11 = idx(i + 1, j + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }

  // Interface side of the rectangle is y = 0: the bottom row for the upper
  // bulk, the top row for the lower bulk.
  const bool interface_at_bottom = (tag == BulkMesh::DomainTag::Plus);
  for (int i = 0; i < nx; ++i) {
    const EdgeTag bottom = (tag_interface && interface_at_bottom) ? EdgeTag::Interface
                                                                  : EdgeTag::Outer;
    const EdgeTag top = (tag_interface && !interface_at_bottom) ? EdgeTag::Interface
                                                                : EdgeTag::Outer;
    m.boundary_edges.push_back({idx(i, 0), idx(i + 1, 0), bottom});
    m.boundary_edges.push_back({idx(i, ny), idx(i + 1, ny), top});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_edges.push_back({idx(0, j), idx(0, j + 1), EdgeTag::Outer});
    m.boundary_edges.push_back({idx(nx, j), idx(nx, j + 1), EdgeTag::Outer});
  }
  return m;
}

void validate_bulk(const BulkMesh& m) {
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const auto& p0 = m.vertices[tri[0]];
    const auto& p1 = m.vertices[tri[1]];
    const auto& p2 = m.vertices[tri[2]];
    if (signed_area(p0, p1, p2) <= 0.0) throw Error("geometry: nonpositive triangle area");
    // Nonobtuse: the two edges leaving each vertex have nonnegative dot product.
    const std::array<std::array<double, 2>, 3> p{p0, p1, p2};
    for (int v = 0; v < 3; ++v) {
      const auto& a = p[v];
      const auto& b = p[(v + 1) % 3];
      const auto& c = p[(v + 2) % 3];
      const double d = (b[0] - a[0]) * (c[0] - a[0]) + (b[1] - a[1]) * (c[1] - a[1]);
      if (d < -1e-14) throw Error("geometry: obtuse triangle angle");
    }
  }
  // Every boundary edge belongs to exactly one triangle.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : m.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  for (const auto& be : m.boundary_edges) {
    int a = be.a, b = be.b;
    if (a > b) std::swap(a, b);
    auto it = edge_count.find({a, b});
    if (it == edge_count.end() || it->second != 1)
      throw Error("geometry: boundary edge not incident to exactly one triangle");
    if (be.tag == EdgeTag::Interface) {
      const auto& pa = m.vertices[be.a];
      const auto& pb = m.vertices[be.b];
      if (std::abs(pa[1]) > 1e-14 || std::abs(pb[1]) > 1e-14 || pa[0] < -1e-14 ||
          pa[0] > 1.0 + 1e-14 || pb[0] < -1e-14 || pb[0] > 1.0 + 1e-14)
        throw Error("geometry: interface edge off the segment y = 0");
    }
  }
}

}  // namespace

std::string to_string(GeometryMode mode) {
  switch (mode) {
    case GeometryMode::Full: return "full";
    case GeometryMode::UpperOnly: return "upper_only";
    case GeometryMode::BulkOnly: return "bulk_only";
  }
  return "full";
}

GeometryMode geometry_mode_from_string(const std::string& s) {
  if (s == "full") return GeometryMode::Full;
  if (s == "upper_only") return GeometryMode::UpperOnly;
  if (s == "bulk_only") return GeometryMode::BulkOnly;
  throw ConfigError("geometry.mode: unknown mode '" + s + "'");
}

double BulkMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

std::vector<double> Measures::concatenated() const {
  std::vector<double> w;
  w.reserve(lumped_plus.size() + lumped_minus.size() + lumped_interface.size());
  w.insert(w.end(), lumped_plus.begin(), lumped_plus.end());
  w.insert(w.end(), lumped_minus.begin(), lumped_minus.end());
  w.insert(w.end(), lumped_interface.begin(), lumped_interface.end());
  return w;
}

void CoupledGeometry::validate() const {
  validate_bulk(plus);
  if (has_minus()) validate_bulk(*minus);
  if (has_interface()) {
    const auto& ifc = *interface;
    for (std::size_t j = 0; j + 1 < ifc.nodes.size(); ++j)
      if (ifc.nodes[j + 1] <= ifc.nodes[j])
        throw Error("geometry: interface nodes not strictly increasing");
    if (ifc.segments.size() + 1 != ifc.nodes.size())
      throw Error("geometry: interface segments do not partition the nodes");
    for (std::size_t s = 0; s < ifc.segments.size(); ++s)
      if (ifc.segments[s][0] != static_cast<int>(s) ||
          ifc.segments[s][1] != static_cast<int>(s) + 1)
        throw Error("geometry: interface segment indices inconsistent");

    auto check_trace = [&](const std::vector<int>& trace, const BulkMesh& bulk) {
      if (trace.size() != ifc.nodes.size()) throw Error("geometry: trace map size mismatch");
      std::vector<int> seen;
      for (std::size_t j = 0; j < trace.size(); ++j) {
        const auto& p = bulk.vertices[trace[j]];
        if (std::abs(p[0] - ifc.nodes[j]) > 1e-14 || std::abs(p[1]) > 1e-14)
          throw Error("geometry: trace map not coordinate-consistent");
        seen.push_back(trace[j]);
      }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw Error("geometry: trace map not injective");
    };
    check_trace(trace_plus, plus);
    if (mode == GeometryMode::Full) check_trace(trace_minus, *minus);
  }
  if (mode == GeometryMode::Full && (!has_minus() || !has_interface()))
    throw Error("geometry: full mode requires both bulks and the interface");
  if (mode == GeometryMode::UpperOnly && (has_minus() || !has_interface()))
    throw Error("geometry: upper_only mode has no lower bulk");
  if (mode == GeometryMode::BulkOnly && (has_minus() || has_interface()))
    throw Error("geometry: bulk_only mode has no interface");
}

CoupledGeometry build_rectangle_geometry(int nx, int ny, GeometryMode mode) {
  if (nx < 1 || ny < 1) throw ConfigError("geometry: nx and ny must be >= 1");
  CoupledGeometry g;
  g.mode = mode;
  const bool with_interface = (mode != GeometryMode::BulkOnly);
  g.plus = build_bulk(nx, ny, BulkMesh::DomainTag::Plus, with_interface);
  if (mode == GeometryMode::Full)
    g.minus = build_bulk(nx, ny, BulkMesh::DomainTag::Minus, true);
  if (with_interface) {
    InterfaceMesh ifc;
    const double hx = 1.0 / nx;
    for (int i = 0; i <= nx; ++i) ifc.nodes.push_back(i * hx);
    for (int i = 0; i < nx; ++i) ifc.segments.push_back({i, i + 1});
    ifc.endpoint_nodes = {0, nx};
    g.interface = std::move(ifc);
    for (int i = 0; i <= nx; ++i) g.trace_plus.push_back(i);  // bottom row of plus
    if (mode == GeometryMode::Full)
      for (int i = 0; i <= nx; ++i) g.trace_minus.push_back(ny * (nx + 1) + i);  // top row
  }
  return g;
}

Measures lumped_measures(const CoupledGeometry& geom) {
  Measures m;
  auto lump_bulk = [](const BulkMesh& mesh, std::vector<double>& w, double& area) {
    w.assign(mesh.vertices.size(), 0.0);
    area = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const double a = mesh.triangle_area(static_cast<int>(t));
      area += a;
      for (int v : mesh.triangles[t]) w[v] += a / 3.0;
    }
  };
  lump_bulk(geom.plus, m.lumped_plus, m.area_plus);
  if (geom.has_minus()) lump_bulk(*geom.minus, m.lumped_minus, m.area_minus);
  if (geom.has_interface()) {
    const auto& ifc = *geom.interface;
    m.lumped_interface.assign(ifc.nodes.size(), 0.0);
    for (const auto& seg : ifc.segments) {
      const double h = ifc.nodes[seg[1]] - ifc.nodes[seg[0]];
      m.length_interface += h;
      m.lumped_interface[seg[0]] += 0.5 * h;
      m.lumped_interface[seg[1]] += 0.5 * h;
    }
  }
  m.V = m.area_plus + m.area_minus + m.length_interface;
  return m;
}

std::vector<double> take_trace(const CoupledGeometry& geom,
                               std::span<const double> bulk_field, Side side) {
  if (!geom.has_interface())
    throw ModeError("take_trace: no interface in bulk_only mode");
  const std::vector<int>* trace = nullptr;
  if (side == Side::Plus) {
    trace = &geom.trace_plus;
  } else {
    if (!geom.has_minus()) throw ModeError("take_trace: no lower bulk in this mode");
    trace = &geom.trace_minus;
  }
  std::vector<double> out(trace->size());
  for (std::size_t j = 0; j < trace->size(); ++j) out[j] = bulk_field[(*trace)[j]];
  return out;
}

}  // namespace bulkface
