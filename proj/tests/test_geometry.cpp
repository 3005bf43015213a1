#include <doctest.h>

#include "trefftz/geometry.hpp"

using namespace trefftz;

TEST_SUITE_BEGIN("geometry");

static Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

TEST_CASE("polygon area and orientation") {
  CHECK(polygon_area_signed(unit_square()) == doctest::Approx(1.0));
  Polygon cw = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(polygon_area_signed(cw) == doctest::Approx(-1.0));
}

TEST_CASE("centroid and diameter") {
  const Vec2 c = polygon_centroid(unit_square());
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));
  CHECK(polygon_diameter(unit_square()) == doctest::Approx(std::sqrt(2.0)));
  Polygon tri = {{0, 0}, {3, 0}, {0, 3}};
  const Vec2 tc = polygon_centroid(tri);
  CHECK(tc.x == doctest::Approx(1.0));
  CHECK(tc.y == doctest::Approx(1.0));
}

TEST_CASE("simple polygon detection") {
  CHECK(polygon_is_simple(unit_square()));
  Polygon bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(polygon_is_simple(bowtie));
  Polygon repeated = {{0, 0}, {1, 0}, {1, 0}, {0, 1}};
  CHECK_FALSE(polygon_is_simple(repeated));
}

TEST_CASE("point containment includes the boundary") {
  CHECK(point_in_polygon({0.5, 0.5}, unit_square()));
  CHECK(point_in_polygon({0.0, 0.5}, unit_square()));
  CHECK(point_in_polygon({1.0, 1.0}, unit_square()));
  CHECK_FALSE(point_in_polygon({1.5, 0.5}, unit_square()));
  CHECK_FALSE(point_in_polygon({-1e-6, 0.5}, unit_square()));
}

TEST_CASE("distance to boundary") {
  CHECK(distance_to_boundary({0.5, 0.5}, unit_square()) == doctest::Approx(0.5));
  CHECK(distance_to_boundary({0.25, 0.5}, unit_square()) == doctest::Approx(0.25));
}

TEST_CASE("complex bilinear dot admits evanescent directions") {
  // d = (cosh s, i sinh s) satisfies d.d = 1 for all s.
  const double s = 0.7;
  CVec2 d{std::cosh(s), cplx(0.0, std::sinh(s))};
  CHECK(std::abs(dot(d, d) - 1.0) < 1e-14);
}

TEST_SUITE_END();
