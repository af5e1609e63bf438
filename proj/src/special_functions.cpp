#include "memdomain/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memdomain/errors.hpp"

namespace memdomain::special {
namespace {

void check_order(int n) {
  if (n < 0) throw DomainError("spherical Bessel order must be >= 0, got " + std::to_string(n));
}

void check_argument(double z) {
  if (!std::isfinite(z)) throw DomainError("spherical Bessel argument must be finite");
  if (z < 0.0) throw DomainError("spherical Bessel argument must be >= 0");
}

double j0_closed(double z) { return std::sin(z) / z; }
double j1_closed(double z) { return std::sin(z) / (z * z) - std::cos(z) / z; }

// Miller's algorithm: recur f_{k-1} = (2k+1)/z f_k - f_{k+1} downward from a
// starting order well above max(n, z), then fix the scale with j_0 or j_1.
double miller_j(int n, double z) {
  const int start = n + std::max(20, static_cast<int>(std::ceil(1.5 * z)));
  double f_next = 0.0;     // f_{k+1}
  double f_curr = 1e-300;  // f_k
  double f_n = (start == n) ? f_curr : 0.0;
  double f_1 = 0.0;
  for (int k = start; k > 0; --k) {
    const double f_prev = (2.0 * k + 1.0) / z * f_curr - f_next;
    f_next = f_curr;
    f_curr = f_prev;
    const int order = k - 1;
    if (order == n) f_n = f_curr;
    if (order == 1) f_1 = f_curr;
    if (std::abs(f_curr) > 1e250) {
      f_curr *= 1e-250;
      f_next *= 1e-250;
      f_n *= 1e-250;
      f_1 *= 1e-250;
    }
  }
  const double f_0 = f_curr;
  // Normalise with whichever of j_0, j_1 is larger in magnitude so that a
  // zero of one of them never sets the scale.
  const double j0 = j0_closed(z);
  const double j1 = j1_closed(z);
  const double scale = (std::abs(j0) >= std::abs(j1)) ? j0 / f_0 : j1 / f_1;
  return f_n * scale;
}

}  // namespace

double sph_j(int n, double z) {
  check_order(n);
  check_argument(z);
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return j0_closed(z);
  // For tiny arguments the leading power-series term is exact to rounding.
  if (z < 1e-8) {
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= z / (2.0 * k + 1.0);
    return term;
  }
  return miller_j(n, z);
}

double sph_y(int n, double z) {
  check_order(n);
  if (!std::isfinite(z)) throw DomainError("spherical Bessel argument must be finite");
  if (z <= 0.0) throw DomainError("y_n(z) is singular for z <= 0");
  const double c = std::cos(z);
  const double s = std::sin(z);
  double y_prev = -c / z;
  if (n == 0) return y_prev;
  double y_curr = -c / (z * z) - s / z;
  for (int k = 1; k < n; ++k) {
    const double y_next = (2.0 * k + 1.0) / z * y_curr - y_prev;
    y_prev = y_curr;
    y_curr = y_next;
  }
  return y_curr;
}

double sph_bessel(BesselKind kind, int n, double z) {
  return kind == BesselKind::FirstKind ? sph_j(n, z) : sph_y(n, z);
}

double sph_deriv(BesselKind kind, int n, double z) {
  check_order(n);
  if (kind == BesselKind::FirstKind) {
    check_argument(z);
    if (z == 0.0) return n == 1 ? 1.0 / 3.0 : 0.0;
  }
  if (n == 0) return -sph_bessel(kind, 1, z);
  return sph_bessel(kind, n - 1, z) - (n + 1.0) / z * sph_bessel(kind, n, z);
}

}  // namespace memdomain::special
