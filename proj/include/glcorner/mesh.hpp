#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "glcorner/geometry.hpp"

namespace glcorner {

enum class NodeTag : std::uint8_t { Interior, Boundary, Dirichlet };

// An ordered chain of nodes (a layer row or ring). Closed chains wrap around.
struct Row {
  std::vector<int> nodes;
  bool closed = false;
  double offset = 0.0;  // physical distance from the outer boundary
};

// P1 triangle mesh with the data needed by the magnetic energy:
// cotangent edge weights, lumped (mixed Voronoi) masses and the line
// integral of F = (-y, x)/2 along each edge.
struct Mesh2D {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;  // counter-clockwise
  std::vector<NodeTag> tag;
  // Nearest-boundary coordinates in physical units (s = arclength, t = distance).
  // Empty when the builder has no boundary parametrization.
  std::vector<double> bs, bt;
  std::vector<Row> rows;
  std::vector<Vec2> corner_points;
  std::vector<int> mirror;  // optional node reflection map

  // derived by finalize()
  std::vector<std::array<int, 2>> edges;  // i < j
  std::vector<double> weight;             // cotangent weights
  std::vector<double> flux;               // int_i^j F . dl
  std::vector<double> mass;
  std::vector<std::uint8_t> on_boundary;  // node lies on a boundary edge

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  double area() const;
  // Orients triangles, builds edges and all derived arrays; throws on
  // degenerate triangles. Nodes on boundary edges that are still tagged
  // Interior become Boundary.
  void finalize();
};

// Triangulates the strip between two chains traversed in the same direction
// (shorter-diagonal rule, ties advance the first chain). Closed chains must
// start at corresponding positions.
void zip_chains(const std::vector<Vec2>& pts, const std::vector<int>& a, const std::vector<int>& b, bool closed,
                std::vector<std::array<int, 3>>& out);

struct LayerMeshOptions {
  double h_s = 0.15;   // tangential spacing, units of eps
  double h_t = 0.1;    // normal spacing, units of eps
  double depth = 12.0; // layer depth, units of eps
  // Tag the innermost row Dirichlet (psi = 0 there). The inner edge is an
  // artificial cut; left natural it hosts a spurious second surface layer.
  bool inner_dirichlet = true;
};

// Boundary-layer mesh of rows parallel to the boundary, for smooth domains
// (one tangential count per row, so a disc mesh is rotation-equivariant) and
// convex polygons (offset polygons, sides sampled independently).
Mesh2D build_layer_mesh(const CurvilinearPolygon& poly, double eps, const LayerMeshOptions& opt = {});

// Truncated sector {0 < theta < beta, rho < R} in polar rings, graded towards
// the vertex; nodes on rho = R are tagged Dirichlet.
Mesh2D build_sector_mesh(double beta, double R, double h);

}  // namespace glcorner
