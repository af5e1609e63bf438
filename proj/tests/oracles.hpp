#pragma once

// Independent reference implementations used only by the tests. None of them
// shares code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

/// j_n(z) from its power series in long double:
///   j_n(z) = z^n / (2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1)).
inline double sph_j_series(int n, double zd) {
  const long double z = zd;
  long double prefactor = 1.0L;
  for (int i = 1; i <= n; ++i) prefactor *= z / static_cast<long double>(2 * i + 1);
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= -(z * z / 2.0L) / (static_cast<long double>(k) * static_cast<long double>(2 * n + 2 * k + 1));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > z) break;
  }
  return static_cast<double>(prefactor * sum);
}

/// y_n(z) from the finite Hankel sum
///   h_n(z) = (-i)^{n+1} e^{iz}/z * sum_{k<=n} i^k (n+k)! / (k! (n-k)! (2z)^k),
/// y_n = Im h_n.
inline double sph_y_hankel(int n, double zd) {
  using C = std::complex<long double>;
  const long double z = zd;
  C sum = 0.0L;
  C ik = 1.0L;
  long double coef = 1.0L;  // (n+k)! / (k! (n-k)!) / (2z)^k
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      coef *= static_cast<long double>((n + k) * (n - k + 1)) / (static_cast<long double>(k) * 2.0L * z);
      ik *= C(0.0L, 1.0L);
    }
    sum += ik * coef;
  }
  C phase = 1.0L;
  for (int i = 0; i <= n; ++i) phase *= C(0.0L, -1.0L);
  const C h = phase * std::exp(C(0.0L, z)) / z * sum;
  return static_cast<double>(h.imag());
}

/// Root of f on [a, b] by plain bisection (f(a), f(b) of opposite sign).
inline double bisect(const std::function<double(double)>& f, double a, double b, int iterations = 200) {
  double fa = f(a);
  for (int i = 0; i < iterations; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Second derivative by Richardson-extrapolated central differences of an
/// analytic first derivative.
inline double richardson_derivative(const std::function<double(double)>& f, double t, double h) {
  auto d = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
  const double d1 = d(h);
  const double d2 = d(h / 2.0);
  const double d3 = d(h / 4.0);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

/// Closed-form branch values with first and second time derivatives, built
/// directly from M = a j_n(z) + b y_n(z), z = eps x, x = e^{-t/alpha}.
/// Uses u = x^{n+1} M, v = x^{-n} M and M'' from the Bessel equation.
struct BranchJet {
  double u, du, ddu, v, dv, ddv;
};

template <class Fn, class DFn>
BranchJet branch_jet(int n, double alpha, double eps, double t, Fn&& m_of, DFn&& dm_of) {
  const double x = std::exp(-t / alpha);
  const double z = eps * x;
  const double m = m_of(z);
  const double dm = dm_of(z);
  const double ddm = -(2.0 / z) * dm - (1.0 - n * (n + 1.0) / (z * z)) * m;
  const double xu = std::pow(x, n + 1);
  const double xv = std::pow(x, -n);
  const double f = (n + 1.0) * m + z * dm;
  const double g = -n * m + z * dm;
  BranchJet j{};
  j.u = xu * m;
  j.du = -xu / alpha * f;
  j.ddu = xu / (alpha * alpha) * ((n + 1.0) * f + z * ((n + 2.0) * dm + z * ddm));
  j.v = xv * m;
  j.dv = -xv / alpha * g;
  j.ddv = xv / (alpha * alpha) * (-n * g + z * ((1.0 - n) * dm + z * ddm));
  return j;
}

// Values frozen from 30-digit arbitrary-precision evaluations
// (sqrt(pi / 2z) times the cylinder Bessel functions of half-integer order).
struct FrozenBessel {
  int n;
  double z;
  double j;
  double y;
};

inline constexpr FrozenBessel kFrozen[] = {
    {0, 0.1, 0.99833416646828152288, -9.9500416527802571031},
    {3, 2.5, 0.10392046970240393973, -0.79660312325324945641},
    {7, 0.3, 1.0760684910114974489e-10, -2066815019.2006562345},
    {12, 10.0, 0.017215999744992806055, -0.40196424849784976283},
    {5, 50.0, -0.020048300563664871196, -0.00069711319645853661664},
    {40, 10.0, 8.435671634459208707e-22, -1510304918835018601.3},
    {2, 1e-5, 6.6666666666190487098e-12, -3000000000049999.2638},
    {10, 150.0, 0.0027803570144551367165, 0.0060682035163051805244},
};

// Lambda at (L = 1, w0 = 2, n = 1, t = T/2) and T itself, 20 digits.
inline constexpr double kLambdaHalfWindow = 0.8047189562170501873;
inline constexpr double kWindowL1W2N1 = 4.1588830833596718565;

}  // namespace oracle
