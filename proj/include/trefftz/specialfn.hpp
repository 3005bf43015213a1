#pragma once

#include <complex>
#include <vector>

namespace trefftz {

struct BesselEval {
  double value = 0.0;
  double derivative = 0.0;
};

struct HankelEval {
  std::complex<double> value;
  std::complex<double> derivative;
};

// Bessel function of the first kind J_nu(x) with derivative.
// Preconditions: nu >= 0, x >= 0 (x > 0 required when nu is fractional and a
// derivative is meaningful).  Integer orders use a normalized downward
// recurrence; fractional orders use the ascending series for small/moderate
// arguments and the large-argument asymptotic expansion otherwise.
BesselEval bessel_j(double nu, double x);

// Bessel function of the second kind Y_n(x), integer n >= 0, x > 0.
BesselEval bessel_y(int n, double x);

// Hankel function of the first kind H^(1)_n = J_n + i Y_n, integer n >= 0,
// x > 0.
HankelEval hankel1(int n, double x);

// J_0..J_nmax at x in one downward-recurrence pass (integer orders, x >= 0).
std::vector<double> bessel_j_sequence(int nmax, double x);

// Y_0..Y_nmax at x > 0 via upward recurrence.
std::vector<double> bessel_y_sequence(int nmax, double x);

}  // namespace trefftz
