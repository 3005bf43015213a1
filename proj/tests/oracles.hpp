// Independent reference implementations used only by tests.  These avoid the
// library's own algorithms on purpose: series where the library recurs,
// integral representations where the library sums series, composite Simpson
// where the library uses Gauss rules.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "trefftz/geometry.hpp"

namespace oracles {

using trefftz::cplx;
using trefftz::Vec2;
using trefftz::CVec2;

inline constexpr double pi = std::numbers::pi;

// Ascending series for J_n with a fixed 40-term budget (ample for x <= 12).
inline double series_j(int n, double x) {
  double term = 1.0;
  for (int m = 1; m <= n; ++m) term *= 0.5 * x / m;  // (x/2)^n / n!
  double sum = 0.0;
  const double q = 0.25 * x * x;
  for (int m = 0; m < 40; ++m) {
    sum += term;
    term *= -q / ((m + 1.0) * (n + m + 1.0));
  }
  return sum;
}

// Composite Simpson on [a, b].
template <typename F>
auto simpson(F&& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  auto sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) {
    sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  return sum * (h / 3.0);
}

// Bessel J_n via its cosine integral representation.
inline double integral_j(int n, double x, int intervals = 100000) {
  return simpson([&](double t) { return std::cos(n * t - x * std::sin(t)); },
                 0.0, pi, intervals) /
         pi;
}

// Bessel Y_n via its integral representation (DLMF 10.9.9).
inline double integral_y(int n, double x) {
  const double part1 =
      simpson([&](double t) { return std::sin(x * std::sin(t) - n * t); }, 0.0,
              pi, 20000) /
      pi;
  const double tmax = 8.0;
  const double part2 =
      simpson(
          [&](double t) {
            return (std::exp(n * t) + (n % 2 == 0 ? 1.0 : -1.0) * std::exp(-n * t)) *
                   std::exp(-x * std::sinh(t));
          },
          0.0, tmax, 40000) /
      pi;
  return part1 - part2;
}

// First positive root of f by bisection.
template <typename F>
double bisect_root(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// 5-point finite-difference Helmholtz residual |lap(f) + k^2 f| at x,
// normalized by k^2|f| + |grad f|/k + eps.
inline double helmholtz_residual(const std::function<cplx(Vec2)>& f,
                                 const std::function<CVec2(Vec2)>& grad,
                                 Vec2 x, double k) {
  const double h = 1e-4 * (2.0 * pi / k);
  const cplx lap = (f({x.x + h, x.y}) + f({x.x - h, x.y}) +
                    f({x.x, x.y + h}) + f({x.x, x.y - h}) - 4.0 * f(x)) /
                   (h * h);
  const double denom =
      k * k * std::abs(f(x)) + trefftz::norm(grad(x)) / k + 1e-300;
  return std::abs(lap + k * k * f(x)) / denom;
}

// Central-difference gradient with step 1e-5 of a wavelength.
inline CVec2 fd_gradient(const std::function<cplx(Vec2)>& f, Vec2 x, double k) {
  const double h = 1e-5 * (2.0 * pi / k);
  return {(f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2.0 * h),
          (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2.0 * h)};
}

// Composite-Simpson line integral of a complex field along [a, b].
inline cplx segment_quadrature(const std::function<cplx(Vec2)>& f, Vec2 a,
                               Vec2 b, int intervals = 2000) {
  const Vec2 t = b - a;
  const double len = trefftz::norm(t);
  return simpson([&](double s) { return f(a + s * t); }, 0.0, 1.0, intervals) *
         len;
}

}  // namespace oracles
