#pragma once

#include <complex>
#include <vector>

namespace trefftz {

using cplx = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

// Complex 2-vector.  dot() is the bilinear pairing (no conjugation); complex
// plane-wave directions satisfy dot(d, d) = 1 under this pairing.
struct CVec2 {
  cplx x = 0.0;
  cplx y = 0.0;
};

inline CVec2 operator+(CVec2 a, CVec2 b) { return {a.x + b.x, a.y + b.y}; }
inline CVec2 operator-(CVec2 a, CVec2 b) { return {a.x - b.x, a.y - b.y}; }
inline CVec2 operator*(cplx s, CVec2 a) { return {s * a.x, s * a.y}; }
inline cplx dot(CVec2 a, CVec2 b) { return a.x * b.x + a.y * b.y; }
inline cplx dot(CVec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline CVec2 conj(CVec2 a) { return {std::conj(a.x), std::conj(a.y)}; }
inline CVec2 to_cvec(Vec2 a) { return {a.x, a.y}; }
double norm(CVec2 a);

using Polygon = std::vector<Vec2>;

// Signed area; positive for counter-clockwise vertex order.
double polygon_area_signed(const Polygon& poly);
// Area-weighted centroid (mass centre).
Vec2 polygon_centroid(const Polygon& poly);
// Diameter: largest pairwise vertex distance.
double polygon_diameter(const Polygon& poly);
// True if no two non-adjacent edges intersect and no vertex repeats.
bool polygon_is_simple(const Polygon& poly);
// Point containment (boundary counts as inside).
bool point_in_polygon(Vec2 p, const Polygon& poly);
// Distance from a point to the polygon boundary.
double distance_to_boundary(Vec2 p, const Polygon& poly);

}  // namespace trefftz
