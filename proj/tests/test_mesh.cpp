#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trefftz/mesh.hpp"

using trefftz::BoundaryEdge;
using trefftz::BoundaryTag;
using trefftz::FacetKind;
using trefftz::Mesh;
using trefftz::SideTags;
using trefftz::Vec2;

namespace {

int count_kind(const Mesh& m, FacetKind k) {
  int n = 0;
  for (const auto& f : m.facets)
    if (f.kind == k) ++n;
  return n;
}

// Three-rectangle mesh with one hanging node: a unit square on the left and
// two half-height rectangles stacked on the right.  The left element's edge
// x = 1 is split by the hanging node at (1, 0.5).
Mesh hanging_node_mesh() {
  Mesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0},
                {2.0, 0.0}, {2.0, 0.5}, {1.0, 0.5}, {2.0, 1.0}};
  m.elements = {{0, 1, 2, 3},      // left unit square
                {1, 4, 5, 6},      // right-bottom
                {6, 5, 7, 2}};     // right-top
  // Tag the whole outer boundary Robin with long per-side segments; the
  // facet builder must match each boundary fragment to its covering segment.
  m.boundary = {{0, 4, BoundaryTag::robin},   // bottom y=0
                {4, 7, BoundaryTag::robin},   // right x=2
                {7, 3, BoundaryTag::robin},   // top y=1
                {3, 0, BoundaryTag::robin}};  // left x=0
  trefftz::finalize_mesh(m);
  return m;
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("uniform 2x2 grid: counts, normals, metrics") {
    Mesh m = trefftz::generate_rect_grid(0.0, 0.0, 1.0, 1.0, 2, 2);
    CHECK(m.num_elements() == 4);
    CHECK(m.vertices.size() == 9);
    REQUIRE(m.metrics.size() == 4);
    // 12 facets total: 4 interior + 8 boundary.
    CHECK(m.facets.size() == 12);
    CHECK(count_kind(m, FacetKind::interior) == 4);
    CHECK(count_kind(m, FacetKind::robin) == 8);
    CHECK(m.has_robin_facet());
    CHECK(m.num_side_incidences() == 16);
    CHECK(m.max_diameter() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    for (const auto& f : m.facets) {
      // Unit normal, orthogonal to the facet direction.
      const Vec2 t{f.b.x - f.a.x, f.b.y - f.a.y};
      CHECK(std::abs(trefftz::norm(f.normal) - 1.0) < 1e-14);
      CHECK(std::abs(f.normal.x * t.x + f.normal.y * t.y) < 1e-14);
      CHECK(f.length == doctest::Approx(0.5).epsilon(1e-14));
      if (f.kind == FacetKind::interior) {
        CHECK(f.elem1 < f.elem2);
        // Normal points out of elem1: from elem1's centroid toward elem2's.
        const Vec2 c1 = m.metrics[f.elem1].centroid;
        const Vec2 c2 = m.metrics[f.elem2].centroid;
        CHECK(f.normal.x * (c2.x - c1.x) + f.normal.y * (c2.y - c1.y) > 0.0);
      } else {
        CHECK(f.elem2 == -1);
        // Boundary normal points away from the domain centre (0.5, 0.5).
        const Vec2 mid{0.5 * (f.a.x + f.b.x), 0.5 * (f.a.y + f.b.y)};
        CHECK(f.normal.x * (mid.x - 0.5) + f.normal.y * (mid.y - 0.5) > 0.0);
      }
    }

    for (const auto& em : m.metrics) {
      CHECK(em.area == doctest::Approx(0.25).epsilon(1e-14));
      CHECK(em.diameter == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
      CHECK(em.inradius_proxy == doctest::Approx(0.25).epsilon(1e-12));
    }
  }

  TEST_CASE("side tags map to the correct boundary facets") {
    SideTags tags;
    tags.left = BoundaryTag::dirichlet;
    tags.bottom = BoundaryTag::dirichlet;
    Mesh m = trefftz::generate_rect_grid(0.0, 0.0, 1.0, 1.0, 2, 2, tags);
    int dir = 0, rob = 0;
    for (const auto& f : m.facets) {
      if (f.kind == FacetKind::dirichlet) {
        ++dir;
        const Vec2 mid{0.5 * (f.a.x + f.b.x), 0.5 * (f.a.y + f.b.y)};
        CHECK((std::abs(mid.x) < 1e-12 || std::abs(mid.y) < 1e-12));
      } else if (f.kind == FacetKind::robin) {
        ++rob;
      }
    }
    CHECK(dir == 4);
    CHECK(rob == 4);
  }

  TEST_CASE("hanging node splits the long edge into matching fragments") {
    Mesh m = hanging_node_mesh();
    REQUIRE(m.num_elements() == 3);
    // Unique facets: left element contributes 5 sides (x=1 split in two),
    // each right element 4; interior pairs merge 3 of them.
    CHECK(m.facets.size() == 10);
    CHECK(count_kind(m, FacetKind::interior) == 3);
    CHECK(m.num_side_incidences() == 13);

    // The two fragments on x = 1 are interior, each of length 1/2, and the
    // elem1 side is always the left square (element 0).
    int on_x1 = 0;
    for (const auto& f : m.facets) {
      if (std::abs(f.a.x - 1.0) < 1e-12 && std::abs(f.b.x - 1.0) < 1e-12) {
        ++on_x1;
        CHECK(f.kind == FacetKind::interior);
        CHECK(f.length == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(f.elem1 == 0);
        CHECK(std::abs(f.normal.x - 1.0) < 1e-14);  // out of element 0
      }
    }
    CHECK(on_x1 == 2);
    // The interior facet between the stacked right elements at y = 0.5.
    int on_y_half = 0;
    for (const auto& f : m.facets)
      if (f.kind == FacetKind::interior && std::abs(f.a.y - 0.5) < 1e-12 &&
          std::abs(f.b.y - 0.5) < 1e-12)
        ++on_y_half;
    CHECK(on_y_half == 1);
  }

  TEST_CASE("save/load round trip preserves the mesh") {
    Mesh m = hanging_node_mesh();
    std::ostringstream out;
    trefftz::save_mesh(m, out);
    std::istringstream in(out.str());
    Mesh back = trefftz::load_mesh(in);
    REQUIRE(back.vertices.size() == m.vertices.size());
    REQUIRE(back.elements == m.elements);
    REQUIRE(back.facets.size() == m.facets.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      CHECK(back.vertices[i].x == doctest::Approx(m.vertices[i].x).epsilon(1e-15));
      CHECK(back.vertices[i].y == doctest::Approx(m.vertices[i].y).epsilon(1e-15));
    }
    CHECK(back.num_side_incidences() == m.num_side_incidences());
  }

  TEST_CASE("loader reports malformed input with line numbers") {
    std::istringstream bad("vertices 2\n0 0\nbroken line\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(trefftz::load_mesh(bad)),
                         doctest::Contains("line 3"), std::runtime_error);
  }

  TEST_CASE("validation rejects broken meshes") {
    // Clockwise element (negative area).
    Mesh cw;
    cw.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    cw.elements = {{0, 3, 2, 1}};
    cw.boundary = {{0, 1, BoundaryTag::robin},
                   {1, 2, BoundaryTag::robin},
                   {2, 3, BoundaryTag::robin},
                   {3, 0, BoundaryTag::robin}};
    CHECK_THROWS_AS(trefftz::finalize_mesh(cw), std::runtime_error);

    // Self-intersecting (bowtie) element.
    Mesh bow;
    bow.vertices = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
    bow.elements = {{0, 1, 2, 3}};
    bow.boundary = {{0, 1, BoundaryTag::robin},
                    {1, 2, BoundaryTag::robin},
                    {2, 3, BoundaryTag::robin},
                    {3, 0, BoundaryTag::robin}};
    CHECK_THROWS_AS(trefftz::finalize_mesh(bow), std::runtime_error);

    // Vertex index out of range.
    Mesh oob;
    oob.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
    oob.elements = {{0, 1, 7}};
    CHECK_THROWS_AS(trefftz::finalize_mesh(oob), std::runtime_error);

    // Boundary edge left untagged.
    Mesh untag;
    untag.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    untag.elements = {{0, 1, 2, 3}};
    untag.boundary = {{0, 1, BoundaryTag::robin},
                      {1, 2, BoundaryTag::robin},
                      {2, 3, BoundaryTag::robin}};  // left side missing
    CHECK_THROWS_AS(trefftz::finalize_mesh(untag), std::runtime_error);

    // Impedance boundary required: an all-Dirichlet mesh is rejected.
    SideTags all_d;
    all_d.left = all_d.right = all_d.bottom = all_d.top = BoundaryTag::dirichlet;
    CHECK_THROWS_AS(
        static_cast<void>(trefftz::generate_rect_grid(0, 0, 1, 1, 2, 2, all_d)),
        std::runtime_error);
  }

  TEST_CASE("element polygons and nonuniform extents") {
    Mesh m = trefftz::generate_rect_grid(-1.0, 0.0, 3.0, 1.0, 4, 1);
    CHECK(m.num_elements() == 4);
    const auto poly = m.element_polygon(0);
    REQUIRE(poly.size() == 4);
    CHECK(trefftz::polygon_area_signed(poly) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.metrics[0].centroid.x == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(m.metrics[0].centroid.y == doctest::Approx(0.5).epsilon(1e-14));
  }
}
