#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trefftz/geometry.hpp"

namespace trefftz {

enum class BoundaryTag { dirichlet, robin };
enum class FacetKind { interior, dirichlet, robin };

// One skeleton facet: a straight segment shared by one boundary element or
// exactly two interior elements.  Element edges are split at hanging nodes,
// so a single element edge may contribute several facets (fragments).
struct Facet {
  FacetKind kind = FacetKind::interior;
  Vec2 a, b;        // endpoints, oriented along elem1's edge direction
  Vec2 normal;      // unit normal pointing out of elem1
  double length = 0.0;
  int elem1 = -1;   // interior: lower element id; boundary: owning element
  int elem2 = -1;   // interior only, higher element id
};

struct ElementMetrics {
  double diameter = 0.0;   // max pairwise vertex distance
  double area = 0.0;
  Vec2 centroid;           // mass centre
  double inradius_proxy = 0.0;  // distance from centroid to element boundary
};

struct BoundaryEdge {
  int va = -1;
  int vb = -1;
  BoundaryTag tag = BoundaryTag::dirichlet;
};

class Mesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> elements;  // CCW vertex indices, simple polygons
  std::vector<BoundaryEdge> boundary;
  std::vector<Facet> facets;
  std::vector<ElementMetrics> metrics;

  int num_elements() const { return static_cast<int>(elements.size()); }
  Polygon element_polygon(int e) const;
  // Largest element diameter (the global mesh width h).
  double max_diameter() const;
  bool has_robin_facet() const;
  // Number of (element, facet) incidences: interior facets count twice.
  int num_side_incidences() const;
};

struct SideTags {
  BoundaryTag left = BoundaryTag::robin;
  BoundaryTag right = BoundaryTag::robin;
  BoundaryTag bottom = BoundaryTag::robin;
  BoundaryTag top = BoundaryTag::robin;
};

// Uniform nx-by-ny grid of axis-aligned rectangles on [x0,x1] x [y0,y1].
Mesh generate_rect_grid(double x0, double y0, double x1, double y1, int nx,
                        int ny, SideTags tags = {});

// Plain-text mesh format:
//   vertices N        followed by N lines "x y"
//   elements M        followed by M lines "k v0 v1 ... v_{k-1}"
//   boundary B        followed by B lines "va vb TAG" with TAG in {D, R}
Mesh load_mesh(const std::string& path);
Mesh load_mesh(std::istream& in);
void save_mesh(const Mesh& mesh, std::ostream& out);

// Validates elements and (re)builds facets and metrics.  Called by the
// constructors above; public so hand-assembled meshes can be finalized.
void finalize_mesh(Mesh& mesh);

}  // namespace trefftz
