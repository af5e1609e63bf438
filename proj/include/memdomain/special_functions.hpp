#pragma once

// Spherical Bessel functions of integer order and real argument.
//
// j_n uses Miller's downward recurrence normalised against the closed forms
// of j_0 / j_1; y_n uses the (stable) upward recurrence from y_0 and y_1.

namespace memdomain::special {

enum class BesselKind { FirstKind, SecondKind };

/// j_n(z) for z >= 0. j_0(0) = 1 and j_n(0) = 0 for n > 0.
double sph_j(int n, double z);

/// y_n(z) for z > 0.
double sph_y(int n, double z);

/// Selects j_n or y_n.
double sph_bessel(BesselKind kind, int n, double z);

/// d/dz of the selected function, from f_n' = f_{n-1} - (n+1)/z f_n
/// (f_0' = -f_1).
double sph_deriv(BesselKind kind, int n, double z);

}  // namespace memdomain::special
