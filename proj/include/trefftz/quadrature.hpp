#pragma once

#include <functional>
#include <vector>

#include "trefftz/geometry.hpp"

namespace trefftz {

// psi(z) = (e^z - 1)/z, continuously extended with psi(0) = 1.  Evaluated by
// an 8-term Taylor series for |z| < 1e-2 to avoid cancellation.
cplx psi(cplx z);

// Closed form of the line integral  int_{[a,b]} e^{w.x} ds
//   = e^{w.a} |b-a| psi(w.(b-a)),   w a complex 2-vector (bilinear dot).
cplx segment_integral_exp(CVec2 w, Vec2 a, Vec2 b);

// Closed form of the area integral  int_F e^{w.x} dV  over a simple polygon,
// by reduction to edge integrals:  sum_e (w.n_e)/(w.w) int_e e^{w.x} ds.
// Falls back to quadrature on a fan triangulation when |w.w| is too small
// relative to |w|^2 for the division to be stable.
cplx polygon_integral_exp(CVec2 w, const Polygon& poly);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum = 2
};

// Gauss-Legendre rule with n nodes (1 <= n <= 128), computed by Newton
// iteration on the Legendre polynomial and cached.
const QuadratureRule& gauss_legendre(int n);

// Node count for integrands oscillating like e^{i k x} along a facet:
// n = max(8, ceil(1.5 * scale / pi) + 6) where scale ~ k * length.
int oscillation_nodes(double scale);

// Quadrature of a complex integrand along the segment [a, b] with the
// oscillation-aware node count (scale ~ k * |b-a|).
cplx facet_integral(const std::function<cplx(Vec2)>& f, Vec2 a, Vec2 b,
                    double oscillation_scale);

// Quadrature of f over a simple polygon: fan triangulation about the
// centroid, collapsed tensor Gauss-Legendre with n nodes per direction.
cplx polygon_integral(const std::function<cplx(Vec2)>& f, const Polygon& poly,
                      int n);

}  // namespace trefftz
