#pragma once

// Damped / amplified oscillator pair with exponentially decaying frequency
//
//   u'' + L u' + w_n(t)^2 u = 0,   v'' - L v' + w_n(t)^2 v = 0,
//   w_n(t) = w0 exp(-L t / (2n+1)),
//
// its closed-form solution through spherical Bessel functions and an
// adaptive-integration oracle. Units: hbar = 1, all quantities adimensional.

#include <functional>
#include <span>
#include <vector>

#include "memdomain/ode.hpp"

namespace memdomain {

/// Intrinsic constants of the system. The reference frequency of momentum k
/// is w0_k = k c.
struct SystemParams {
  double L = 1.0;  ///< damping constant
  double c = 1.0;  ///< propagation speed

  /// Threshold momentum k0 = L / (2c).
  [[nodiscard]] double k0() const { return L / (2.0 * c); }
  [[nodiscard]] double omega0(double k) const { return k * c; }
  /// Throws DomainError unless L > 0 and c > 0 (both finite).
  void validate() const;
};

/// Momentum label k > 0 and openness order n >= 0.
struct ModeIndex {
  double k = 1.0;
  int n = 0;
  /// Throws UnsupportedBranch for n < 0 and DomainError for k <= 0.
  void validate() const;
};

/// alpha_n = (2n+1)/L, epsilon_n = w0 alpha_n, x(t) = exp(-t/alpha_n),
/// z(t) = epsilon_n x(t).
struct Substitution {
  double alpha = 1.0;
  double epsilon = 1.0;
  [[nodiscard]] double x(double t) const;
  [[nodiscard]] double z(double t) const { return epsilon * x(t); }
};

Substitution substitution(const SystemParams& params, const ModeIndex& mode);

/// Coefficients of M_n = a j_n + b y_n.
struct BesselCoeffs {
  double a = 1.0;
  double b = 0.0;
};

struct PairValue {
  double u = 0.0;
  double v = 0.0;
};

/// Values and time derivatives of the pair.
struct PairState {
  double u = 0.0;
  double du = 0.0;
  double v = 0.0;
  double dv = 0.0;
};

double omega_mode(const SystemParams& params, const ModeIndex& mode, double t);

/// Omega_n(t)^2 = w_n(t)^2 - L^2/4; negative outside the reality window.
double common_frequency_sq(const SystemParams& params, const ModeIndex& mode, double t);

/// Omega_n(t). Throws RealityViolation when Omega^2 < 0.
double common_frequency(const SystemParams& params, const ModeIndex& mode, double t);

PairValue closed_form_pair(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t);

/// Closed form together with its analytic time derivatives.
PairState closed_form_state(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t);

/// r_n(t) = sqrt(2) u(t) exp(L t / 2).
double parametric_radius(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t);

/// Same radius evaluated through the amplified branch: sqrt(2) v(t) exp(-L t/2).
double parametric_radius_from_v(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs,
                                double t);

enum class TrajectoryMethod { ClosedForm, Integrated };

struct Trajectory {
  std::vector<double> times;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> r;
  ModeIndex mode;
  TrajectoryMethod method = TrajectoryMethod::ClosedForm;
};

/// count >= 2 equally spaced points on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t count);

Trajectory closed_form_trajectory(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs,
                                  std::span<const double> grid);

/// Adaptive integration of both branches from (u0, u0', v0, v0').
/// rel_tol must lie in [1e-13, 1e-3]; the absolute tolerance equals rel_tol.
Trajectory integrate_pair(const SystemParams& params, const ModeIndex& mode, const PairState& init,
                          std::span<const double> grid, double rel_tol, ode::Stats* stats = nullptr);

/// Single oscillator x'' + damping x' + omega_sq(t) x = 0 on a monotone grid
/// (forward or backward). Returns (x, x') at each grid point.
std::vector<ode::State<2>> integrate_oscillator(double damping, const std::function<double(double)>& omega_sq,
                                                ode::State<2> init, std::span<const double> grid,
                                                double rel_tol);

struct ResidualReport {
  double max_u = 0.0;
  double max_v = 0.0;
  std::size_t argmax_u = 0;
  std::size_t argmax_v = 0;
};

/// Maximum absolute residual of each oscillator equation, using fourth-order
/// central differences on the interior of a uniform grid.
/// Throws GridTooCoarse when the spacing exceeds 1e-2 alpha_n.
ResidualReport residual(const SystemParams& params, const ModeIndex& mode, const Trajectory& trajectory);

}  // namespace memdomain
