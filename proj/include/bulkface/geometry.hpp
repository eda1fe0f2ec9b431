#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bulkface {

// Geometry modes:
//   Full      - upper bulk (0,1)^2, lower bulk (0,1)x(-1,0), interface y = 0
//   UpperOnly - upper bulk and interface, no lower bulk (m- forced to 0)
//   BulkOnly  - upper bulk alone with pure Neumann boundary (no interface)
enum class GeometryMode { Full, UpperOnly, BulkOnly };

enum class Side { Plus, Minus };

enum class EdgeTag { Interface, Outer };

std::string to_string(GeometryMode mode);
GeometryMode geometry_mode_from_string(const std::string& s);

struct BulkMesh {
  enum class DomainTag { Plus, Minus };

  DomainTag domain_tag = DomainTag::Plus;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;  // positively oriented

  struct BoundaryEdge {
    int a = 0;
    int b = 0;
    EdgeTag tag = EdgeTag::Outer;
  };
  std::vector<BoundaryEdge> boundary_edges;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  double triangle_area(int t) const;
};

struct InterfaceMesh {
  std::vector<double> nodes;                 // x coordinates, strictly increasing, y = 0
  std::vector<std::array<int, 2>> segments;  // partition of [0,1]
  std::array<int, 2> endpoint_nodes{0, 0};

  int node_count() const { return static_cast<int>(nodes.size()); }
};

struct Measures {
  std::vector<double> lumped_plus;
  std::vector<double> lumped_minus;
  std::vector<double> lumped_interface;
  double area_plus = 0.0;
  double area_minus = 0.0;
  double length_interface = 0.0;
  double V = 0.0;

  // Weights concatenated in the global [u+ ; u- ; uG] unknown ordering.
  std::vector<double> concatenated() const;
};

struct CoupledGeometry {
  GeometryMode mode = GeometryMode::Full;
  BulkMesh plus;
  std::optional<BulkMesh> minus;
  std::optional<InterfaceMesh> interface;
  // interface node index -> bulk vertex index (meshes are matching)
  std::vector<int> trace_plus;
  std::vector<int> trace_minus;

  bool has_minus() const { return minus.has_value(); }
  bool has_interface() const { return interface.has_value(); }

  int n_plus() const { return plus.vertex_count(); }
  int n_minus() const { return has_minus() ? minus->vertex_count() : 0; }
  int n_gamma() const { return has_interface() ? interface->node_count() : 0; }
  int total_unknowns() const { return n_plus() + n_minus() + n_gamma(); }

  int offset_plus() const { return 0; }
  int offset_minus() const { return n_plus(); }
  int offset_gamma() const { return n_plus() + n_minus(); }

  // Checks every structural invariant (orientation, nonobtuseness, boundary
  // tags, trace consistency); throws on the first violation.
  void validate() const;
};

// Structured right-triangle mesh of the canonical configuration. nx, ny >= 1
// cells per direction and per bulk; bulk boundary nodes on y = 0 coincide
// with the interface nodes, so traces are index maps.
CoupledGeometry build_rectangle_geometry(int nx, int ny, GeometryMode mode);

// Lumped quadrature weights: a third of the adjacent triangle areas per bulk
// vertex, half of the adjacent segment lengths per interface node.
Measures lumped_measures(const CoupledGeometry& geom);

// Nodal trace of a bulk field on the interface: out[j] = field[trace(j)].
std::vector<double> take_trace(const CoupledGeometry& geom,
                               std::span<const double> bulk_field, Side side);

}  // namespace bulkface
