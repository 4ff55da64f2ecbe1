#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "steklov/shape.hpp"

namespace steklov {

struct BoundaryEdge {
  std::array<int, 2> v;  // oriented so the domain lies to the left
  int marker = 0;        // boundary component, numbered by discovery order
};

struct TriangleMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // target edge length
};

struct Volumes {
  double vol = 0.0;
  double boundary_vol = 0.0;
};

/// Meshes the shape with maximum edge length at most 1.5·h.
///
/// Star-shaped catalog shapes are fanned from the centroid of an arc-length
/// sampled boundary polygon and then uniformly refined; boundary midpoints are
/// placed on the exact curve at every level. The annulus uses a structured
/// polar grid; polygons that are not star-shaped about their centroid are
/// ear-clipped before refinement.
///
/// Throws StepTooCoarse when h exceeds the inradius of the shape.
TriangleMesh build_mesh(const DomainShape& shape, double h);

/// Uniform 1-to-4 split; new boundary vertices are projected onto the shape boundary.
TriangleMesh refine(const TriangleMesh& mesh, const DomainShape& shape);

Volumes volumes(const TriangleMesh& mesh);

double signed_area(const TriangleMesh& mesh, int triangle);
double max_edge_length(const TriangleMesh& mesh);
int boundary_component_count(const TriangleMesh& mesh);

/// Sorted ids of vertices touched by boundary edges.
std::vector<int> boundary_vertices(const TriangleMesh& mesh);

/// Recomputes boundary edges (and markers) from the triangle list.
void rebuild_boundary(TriangleMesh& mesh);

/// Checks orientation, edge manifoldness, boundary-edge consistency and
/// connectivity. Throws MalformedInput.
void validate_mesh(const TriangleMesh& mesh);

/// ".tmesh" text format: `nv nt nb`, then vertices, triangles and boundary edges.
void write_tmesh(std::ostream& os, const TriangleMesh& mesh);
TriangleMesh read_tmesh(std::istream& is);

}  // namespace steklov
