#include "trefftz/specialfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trefftz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.577215664901532860606512090082;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("specialfn: " + msg);
}

// --- J, integer order: normalized downward (Miller) recurrence ------------

std::vector<double> miller_j(int nmax, double x) {
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  // The downward sweep must begin deep in the super-exponential decay regime
  // (order well above both nmax and the turning point at order ~ x), so that
  // the arbitrary seed's contamination by the growing solution Y is below
  // round-off: J_M(x)/Y_M(x) ~ pi (x/2)^{2M} / (M! (M-1)!).
  // and so that J_start(x) itself is below double round-off, which keeps the
  // truncated normalization series sum_even J_2m = 1 accurate.
  const int start = std::max(nmax, static_cast<int>(std::ceil(x))) +
                    std::max(35, static_cast<int>(std::ceil(1.5 * x)));
  long double fp1 = 0.0L;  // J_{m+1} (unnormalized)
  long double fm = 1e-30L; // J_m
  long double sum = 0.0L;  // accumulates J_0 + 2*sum_{m>=1} J_{2m}
  for (int m = start; m >= 1; --m) {
    long double fm1 = (2.0L * m / x) * fm - fp1;  // J_{m-1}
    fp1 = fm;
    fm = fm1;
    if (m - 1 <= nmax) j[m - 1] = static_cast<double>(fm);
    if (((m - 1) & 1) == 0) sum += (m - 1 == 0) ? fm : 2.0L * fm;
    // Rescale to avoid overflow of the unnormalized recurrence.
    if (std::abs(static_cast<double>(fm)) > 1e250) {
      fm *= 1e-250L;
      fp1 *= 1e-250L;
      sum *= 1e-250L;
      for (auto& v : j) v *= 1e-250;
    }
  }
  const long double scale = 1.0L / sum;
  for (auto& v : j) v = static_cast<double>(v * scale);
  return j;
}

// --- fractional order: ascending series / large-argument asymptotics -------

double j_series(double nu, double x) {
  // J_nu(x) = (x/2)^nu sum_m (-1)^m (x^2/4)^m / (m! Gamma(nu+m+1))
  const long double q = 0.25L * static_cast<long double>(x) * x;
  long double term =
      std::exp(static_cast<long double>(nu) * std::log(0.5L * x) -
               std::lgamma(1.0L + nu));
  long double sum = term;
  for (int m = 0; m < 400; ++m) {
    term *= -q / ((m + 1.0L) * (nu + m + 1.0L));
    sum += term;
    if (std::abs(term) < 1e-20L * std::abs(sum) + 1e-320L) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion, truncated at the smallest term.
void jy_asymptotic(double nu, double x, double* jv, double* yv) {
  const long double mu = 4.0L * nu * nu;
  long double p = 1.0L, q = 0.0L;
  long double term = 1.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int m = 1; m < 60; ++m) {
    const long double odd = 2.0L * m - 1.0L;
    term *= (mu - odd * odd) / (8.0L * m * x);
    if (std::abs(term) > prev) break;  // divergence onset: stop at best term
    prev = std::abs(term);
    if (m & 1) {
      q += (((m - 1) / 2) % 2 == 0) ? term : -term;
    } else {
      p += ((m / 2) % 2 == 0) ? term : -term;
    }
    if (std::abs(term) < 1e-20L) break;
  }
  const long double chi = x - (0.5L * nu + 0.25L) * kPi;
  const long double amp = std::sqrt(2.0L / (kPi * x));
  if (jv) *jv = static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
  if (yv) *yv = static_cast<double>(amp * (p * std::sin(chi) + q * std::cos(chi)));
}

double j_fractional(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= std::max(12.0, 2.0 * nu)) return j_series(nu, x);
  double jv;
  jy_asymptotic(nu, x, &jv, nullptr);
  return jv;
}

// --- Y_0, Y_1: logarithmic series (small x) / asymptotics (large x) --------

void y01_series(double x, double* y0, double* y1) {
  const long double q = 0.25L * static_cast<long double>(x) * x;
  const long double lg = std::log(0.5L * static_cast<long double>(x));
  // Y_0 = (2/pi)[(ln(x/2)+gamma) J_0 + sum_{m>=1} (-1)^{m+1} H_m q^m/(m!)^2]
  long double term = 1.0L;
  long double h = 0.0L;
  long double s0 = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    h += 1.0L / m;
    const long double add = ((m & 1) ? 1.0L : -1.0L) * h * term;
    s0 += add;
    if (std::abs(add) < 1e-22L * (std::abs(s0) + 1.0L)) break;
  }
  const double j0 = bessel_j(0.0, x).value;
  const double j1 = bessel_j(1.0, x).value;
  *y0 = static_cast<double>((2.0L / kPi) * ((lg + kEulerGamma) * j0 + s0));
  // Y_1 = (2/pi) ln(x/2) J_1 - (2/(pi x))
  //       - (1/pi) sum_{m>=0} (-1)^m [psi(m+1)+psi(m+2)] (x/2)^{2m+1}/(m!(m+1)!)
  long double psi_m1 = -static_cast<long double>(kEulerGamma);  // psi(1)
  long double psi_m2 = 1.0L - kEulerGamma;                      // psi(2)
  long double t = 0.5L * x;                                     // (x/2)^{2m+1}/(m!(m+1)!)
  long double s1 = 0.0L;
  for (int m = 0; m < 200; ++m) {
    const long double add = ((m & 1) ? -1.0L : 1.0L) * (psi_m1 + psi_m2) * t;
    s1 += add;
    t *= q / ((m + 1.0L) * (m + 2.0L));
    psi_m1 += 1.0L / (m + 1.0L);
    psi_m2 += 1.0L / (m + 2.0L);
    if (std::abs(add) < 1e-22L * (std::abs(s1) + 1.0L) && m > 3) break;
  }
  *y1 = static_cast<double>((2.0L / kPi) * lg * j1 - 2.0L / (kPi * x) -
                            s1 / kPi);
}

void y01(double x, double* y0, double* y1) {
  if (x <= 16.0) {
    y01_series(x, y0, y1);
  } else {
    jy_asymptotic(0.0, x, nullptr, y0);
    jy_asymptotic(1.0, x, nullptr, y1);
  }
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
  require(nmax >= 0, "bessel_j_sequence: nmax must be >= 0");
  require(x >= 0.0, "bessel_j_sequence: x must be >= 0");
  return miller_j(nmax, x);
}

BesselEval bessel_j(double nu, double x) {
  require(nu >= 0.0, "bessel_j: order must be >= 0");
  require(x >= 0.0, "bessel_j: argument must be >= 0");
  const double nint = std::nearbyint(nu);
  const bool integer_order = (nu == nint);
  if (integer_order) {
    const int n = static_cast<int>(nint);
    if (x == 0.0) {
      return {n == 0 ? 1.0 : 0.0, n == 1 ? 0.5 : 0.0};
    }
    const auto j = miller_j(n + 1, x);
    const double deriv = (n == 0) ? -j[1] : 0.5 * (j[n - 1] - j[n + 1]);
    return {j[n], deriv};
  }
  if (x == 0.0) {
    // nu > 0 fractional: value 0; derivative finite only for nu >= 1.
    if (nu > 1.0) return {0.0, 0.0};
    if (nu == 1.0) return {0.0, 0.5};
    return {0.0, std::numeric_limits<double>::infinity()};
  }
  const double jnu = j_fractional(nu, x);
  const double jnup1 = j_fractional(nu + 1.0, x);
  return {jnu, (nu / x) * jnu - jnup1};
}

BesselEval bessel_y(int n, double x) {
  require(n >= 0, "bessel_y: order must be >= 0");
  require(x > 0.0, "bessel_y: argument must be > 0");
  double y0, y1;
  y01(x, &y0, &y1);
  if (n == 0) return {y0, -y1};
  if (n == 1) return {y1, y0 - y1 / x};
  double ym = y0, yc = y1;
  for (int m = 1; m < n; ++m) {
    const double yn = (2.0 * m / x) * yc - ym;
    ym = yc;
    yc = yn;
  }
  // yc = Y_n, ym = Y_{n-1}; Y_n' = Y_{n-1} - (n/x) Y_n
  return {yc, ym - (n / x) * yc};
}

std::vector<double> bessel_y_sequence(int nmax, double x) {
  require(nmax >= 0, "bessel_y_sequence: nmax must be >= 0");
  require(x > 0.0, "bessel_y_sequence: x must be > 0");
  std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
  double y0, y1;
  y01(x, &y0, &y1);
  y[0] = y0;
  if (nmax >= 1) y[1] = y1;
  for (int m = 1; m < nmax; ++m) {
    y[m + 1] = (2.0 * m / x) * y[m] - y[m - 1];
  }
  return y;
}

HankelEval hankel1(int n, double x) {
  const BesselEval j = bessel_j(static_cast<double>(n), x);
  const BesselEval y = bessel_y(n, x);
  return {{j.value, y.value}, {j.derivative, y.derivative}};
}

}  // namespace trefftz
