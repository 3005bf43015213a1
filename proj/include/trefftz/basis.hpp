#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "trefftz/geometry.hpp"

namespace trefftz {

// Propagation direction of a plane wave e^{ik d.(x-x_K)}.  Complex entries
// describe evanescent waves; the bilinear constraint dot(d, d) = 1 is
// enforced on construction.
struct Direction {
  CVec2 d;
};

Direction make_direction(cplx dx, cplx dy);

// p distinct unit directions at angles 2*pi*l/p, l = 0..p-1.
std::vector<Direction> equispaced_directions(int p);

struct BasisEval {
  std::vector<cplx> values;
  std::vector<CVec2> gradients;
};

// One term of a pure-exponential representation coeff * e^{w.x} (global
// coordinates).  Members that are finite sums of such terms (plane waves,
// wave-band functions) expose it so facet integrals can use closed forms.
struct ExpTerm {
  cplx coeff;
  CVec2 w;
};
using ExpRep = std::vector<ExpTerm>;

struct PlaneWaveSpec {
  std::vector<Direction> directions;
};

// Circular-wave (Fourier-Bessel) family J_l(k r) e^{i l theta}; member order
// l = 0, 1, -1, 2, -2, ..., q, -q.  With `scaled`, member l is divided by
// k * sqrt(J_l'(k h)^2 + J_l(k h)^2) evaluated at the element diameter h.
struct CircularWaveSpec {
  int q = 0;
  bool scaled = false;
  double h_for_scaling = 1.0;
};

// Fundamental-solution family H1_0(k |x - y_l|), poles strictly outside the
// element; members ordered by pole index.
struct FundamentalSpec {
  std::vector<Vec2> poles;
};

// Multipole family H1_l(k |x - x0|) e^{i l theta} about a singular point x0
// outside the element; member order l = 0, 1, -1, ..., q, -q.
struct MultipoleSpec {
  Vec2 pole;
  int q = 0;
};

// Wave-band family on a box of extents (lx, ly):
//   cos(kx_j xt) e^{+-i sqrt(k^2-kx_j^2) yt},  kx_j = j pi / lx,
// j = 0..floor(N k lx / pi), then the same with x and y exchanged; local
// coordinates (xt, yt) are relative to the space centre.  Square roots of
// negative arguments take the branch with nonnegative imaginary part
// (evanescent members decay away from the centre-line).  Member order:
// the x-set j ascending with (+,-) sign pairs, then the y-set.
struct WaveBandSpec {
  double truncation = 1.0;  // N
  double lx = 1.0;
  double ly = 1.0;
};

// Corner-singular family J_{l/alpha}(k r) sin(l theta / alpha), l = 1..count,
// in a local frame whose polar angle is measured from one corner edge
// (rotated by frame_angle); alpha in (0, 2) is the opening in units of pi.
struct CornerWaveSpec {
  Vec2 corner;
  double alpha = 1.0;
  int count = 1;
  double frame_angle = 0.0;
};

class LocalSpace {
 public:
  using Spec = std::variant<PlaneWaveSpec, CircularWaveSpec, FundamentalSpec,
                            MultipoleSpec, WaveBandSpec, CornerWaveSpec>;

  LocalSpace(double k, Vec2 center, Spec spec);

  double k() const { return k_; }
  Vec2 center() const { return center_; }
  const Spec& spec() const { return spec_; }
  int dim() const;

  // Values and gradients of all members at x.  Throws std::domain_error when
  // x hits a pole of a singular member.
  BasisEval eval(Vec2 x) const;

  // Exponential representation of one member, if the family has one.
  std::optional<ExpRep> exp_rep(int member) const;
  bool is_exponential() const;

 private:
  double k_;
  Vec2 center_;
  Spec spec_;
};

// Convenience evaluator matching the operation-style interface.
inline BasisEval eval_basis(const LocalSpace& space, Vec2 x) {
  return space.eval(x);
}

// Bounding-box extents of an element, the natural wave-band box.
std::pair<double, double> wbm_box(const Polygon& poly);

// Validates that every pole lies strictly outside the closed element; throws
// std::invalid_argument otherwise.  Used by builders that know the geometry.
void check_poles_outside(const std::vector<Vec2>& poles, const Polygon& poly);

// n pole positions equally spaced in arclength along the polygon boundary
// dilated by `factor` about the centroid (the default source curve for
// fundamental-solution discretizations).
std::vector<Vec2> poles_on_dilated_boundary(const Polygon& poly, double factor,
                                            int n);

}  // namespace trefftz
