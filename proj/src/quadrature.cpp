#include "trefftz/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace trefftz {

cplx psi(cplx z) {
  if (std::abs(z) < 1e-2) {
    // 1 + z/2! + z^2/3! + ... , 8 terms
    cplx sum = 0.0;
    cplx term = 1.0;
    for (int n = 1; n <= 8; ++n) {
      sum += term;
      term *= z / static_cast<double>(n + 1);
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

cplx segment_integral_exp(CVec2 w, Vec2 a, Vec2 b) {
  const Vec2 t = b - a;
  return std::exp(dot(w, a)) * norm(t) * psi(dot(w, t));
}

namespace {

std::vector<QuadratureRule> g_gl_cache(129);
std::mutex g_gl_mutex;

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1 || n > 128) {
    throw std::invalid_argument("gauss_legendre: n must be in [1, 128]");
  }
  std::lock_guard<std::mutex> lock(g_gl_mutex);
  if (g_gl_cache[n].nodes.empty()) g_gl_cache[n] = compute_gauss_legendre(n);
  return g_gl_cache[n];
}

int oscillation_nodes(double scale) {
  const int n =
      std::max(8, static_cast<int>(std::ceil(1.5 * scale / std::numbers::pi)) + 6);
  return std::min(n, 128);
}

cplx facet_integral(const std::function<cplx(Vec2)>& f, Vec2 a, Vec2 b,
                    double oscillation_scale) {
  const QuadratureRule& rule = gauss_legendre(oscillation_nodes(oscillation_scale));
  const Vec2 mid = 0.5 * (a + b);
  const Vec2 half = 0.5 * (b - a);
  cplx sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    sum += rule.weights[q] * f(mid + rule.nodes[q] * half);
  }
  return sum * norm(half);
}

cplx polygon_integral(const std::function<cplx(Vec2)>& f, const Polygon& poly,
                      int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  const Vec2 c = polygon_centroid(poly);
  cplx total = 0.0;
  const std::size_t nv = poly.size();
  for (std::size_t e = 0; e < nv; ++e) {
    const Vec2 v1 = poly[e], v2 = poly[(e + 1) % nv];
    // Triangle (c, v1, v2), collapsed mapping from the unit square:
    // P(u,v) = c + u(v1 - c) + u v (v2 - v1), |J| = u * 2|T|.
    const double a2 = cross(v1 - c, v2 - c);  // twice the signed area
    cplx tri = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = 0.5 * (rule.nodes[i] + 1.0);
      const double wu = 0.5 * rule.weights[i];
      for (int j = 0; j < n; ++j) {
        const double v = 0.5 * (rule.nodes[j] + 1.0);
        const double wv = 0.5 * rule.weights[j];
        const Vec2 p = c + u * ((v1 - c) + v * (v2 - v1));
        tri += wu * wv * u * f(p);
      }
    }
    total += tri * a2;
  }
  return total;
}

cplx polygon_integral_exp(CVec2 w, const Polygon& poly) {
  const cplx ww = dot(w, w);
  const double wmag2 = std::norm(w.x) + std::norm(w.y);
  if (std::abs(ww) <= 1e-10 * std::max(1.0, wmag2)) {
    return polygon_integral([&](Vec2 p) { return std::exp(dot(w, p)); }, poly,
                            32);
  }
  cplx sum = 0.0;
  const std::size_t nv = poly.size();
  for (std::size_t e = 0; e < nv; ++e) {
    const Vec2 a = poly[e], b = poly[(e + 1) % nv];
    const Vec2 t = b - a;
    const double len = norm(t);
    if (len == 0.0) continue;
    const Vec2 nrm{t.y / len, -t.x / len};  // outward for CCW order
    sum += (dot(w, nrm) / ww) * segment_integral_exp(w, a, b);
  }
  return sum;
}

}  // namespace trefftz
