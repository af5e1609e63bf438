#include "memdomain/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memdomain/errors.hpp"
#include "memdomain/special_functions.hpp"

namespace memdomain {

void SystemParams::validate() const {
  if (!std::isfinite(L) || L <= 0.0) throw DomainError("L must be finite and > 0");
  if (!std::isfinite(c) || c <= 0.0) throw DomainError("c must be finite and > 0");
}

void ModeIndex::validate() const {
  if (n < 0) {
    throw UnsupportedBranch("openness order n = " + std::to_string(n) +
                            " selects the growing-frequency branch, which is not supported");
  }
  if (!std::isfinite(k) || k <= 0.0) throw DomainError("momentum k must be finite and > 0");
}

double Substitution::x(double t) const { return std::exp(-t / alpha); }

Substitution substitution(const SystemParams& params, const ModeIndex& mode) {
  params.validate();
  mode.validate();
  Substitution s;
  s.alpha = (2.0 * mode.n + 1.0) / params.L;
  s.epsilon = params.omega0(mode.k) * s.alpha;
  return s;
}

namespace {

void check_time(double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  if (t < 0.0) throw DomainError("time must be >= 0");
}

struct BesselValue {
  double m = 0.0;
  double dm = 0.0;
};

BesselValue bessel_combination(int n, BesselCoeffs coeffs, double z) {
  using special::BesselKind;
  if (coeffs.a == 0.0 && coeffs.b == 0.0) throw DomainError("Bessel coefficients (a, b) must not both vanish");
  BesselValue out;
  if (coeffs.a != 0.0) {
    out.m += coeffs.a * special::sph_j(n, z);
    out.dm += coeffs.a * special::sph_deriv(BesselKind::FirstKind, n, z);
  }
  if (coeffs.b != 0.0) {
    out.m += coeffs.b * special::sph_y(n, z);
    out.dm += coeffs.b * special::sph_deriv(BesselKind::SecondKind, n, z);
  }
  return out;
}

}  // namespace

double omega_mode(const SystemParams& params, const ModeIndex& mode, double t) {
  params.validate();
  mode.validate();
  check_time(t);
  return params.omega0(mode.k) * std::exp(-params.L * t / (2.0 * mode.n + 1.0));
}

double common_frequency_sq(const SystemParams& params, const ModeIndex& mode, double t) {
  const double w = omega_mode(params, mode, t);
  const double half_l = 0.5 * params.L;
  return (w - half_l) * (w + half_l);
}

double common_frequency(const SystemParams& params, const ModeIndex& mode, double t) {
  const double sq = common_frequency_sq(params, mode, t);
  if (sq < 0.0) {
    throw RealityViolation("common frequency is imaginary at t = " + std::to_string(t) + " (over-damped regime)");
  }
  return std::sqrt(sq);
}

PairState closed_form_state(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t) {
  check_time(t);
  const Substitution s = substitution(params, mode);
  const double z = s.z(t);
  const BesselValue b = bessel_combination(mode.n, coeffs, z);
  const double n = mode.n;
  const double damped = std::exp(-(n + 1.0) * t / s.alpha);  // x^{n+1}
  const double amplified = std::exp(n * t / s.alpha);        // x^{-n}
  PairState out;
  out.u = b.m * damped;
  out.du = -damped / s.alpha * (z * b.dm + (n + 1.0) * b.m);
  out.v = b.m * amplified;
  out.dv = -amplified / s.alpha * (z * b.dm - n * b.m);
  return out;
}

PairValue closed_form_pair(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t) {
  check_time(t);
  const Substitution s = substitution(params, mode);
  const BesselValue b = bessel_combination(mode.n, coeffs, s.z(t));
  return {b.m * std::exp(-(mode.n + 1.0) * t / s.alpha), b.m * std::exp(mode.n * t / s.alpha)};
}

double parametric_radius(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs, double t) {
  return std::numbers::sqrt2 * closed_form_pair(params, mode, coeffs, t).u * std::exp(0.5 * params.L * t);
}

double parametric_radius_from_v(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs,
                                double t) {
  return std::numbers::sqrt2 * closed_form_pair(params, mode, coeffs, t).v * std::exp(-0.5 * params.L * t);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t count) {
  if (count < 2) throw DomainError("a grid needs at least two points");
  std::vector<double> grid(count);
  const double span = t1 - t0;
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = t0 + span * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = t1;
  return grid;
}

Trajectory closed_form_trajectory(const SystemParams& params, const ModeIndex& mode, BesselCoeffs coeffs,
                                  std::span<const double> grid) {
  Trajectory tr;
  tr.mode = mode;
  tr.method = TrajectoryMethod::ClosedForm;
  tr.times.assign(grid.begin(), grid.end());
  tr.u.reserve(grid.size());
  tr.v.reserve(grid.size());
  tr.r.reserve(grid.size());
  for (double t : grid) {
    const PairValue p = closed_form_pair(params, mode, coeffs, t);
    tr.u.push_back(p.u);
    tr.v.push_back(p.v);
    tr.r.push_back(std::numbers::sqrt2 * p.u * std::exp(0.5 * params.L * t));
  }
  return tr;
}

namespace {

void check_rel_tol(double rel_tol) {
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-3)) throw DomainError("rel_tol must lie in [1e-13, 1e-3]");
}

}  // namespace

Trajectory integrate_pair(const SystemParams& params, const ModeIndex& mode, const PairState& init,
                          std::span<const double> grid, double rel_tol, ode::Stats* stats) {
  params.validate();
  mode.validate();
  check_rel_tol(rel_tol);
  if (grid.empty()) throw DomainError("empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("time grid must be increasing");
  }
  const double L = params.L;
  const double w0 = params.omega0(mode.k);
  const double rate = 2.0 * L / (2.0 * mode.n + 1.0);
  auto rhs = [=](double t, const ode::State<4>& y) {
    const double w2 = w0 * w0 * std::exp(-rate * t);
    return ode::State<4>{y[1], -L * y[1] - w2 * y[0], y[3], L * y[3] - w2 * y[2]};
  };
  const auto states = ode::integrate<4>(rhs, ode::State<4>{init.u, init.du, init.v, init.dv}, grid,
                                        ode::Tolerances{rel_tol, rel_tol}, stats);
  Trajectory tr;
  tr.mode = mode;
  tr.method = TrajectoryMethod::Integrated;
  tr.times.assign(grid.begin(), grid.end());
  for (std::size_t i = 0; i < states.size(); ++i) {
    tr.u.push_back(states[i][0]);
    tr.v.push_back(states[i][2]);
    tr.r.push_back(std::numbers::sqrt2 * states[i][0] * std::exp(0.5 * L * grid[i]));
  }
  return tr;
}

std::vector<ode::State<2>> integrate_oscillator(double damping, const std::function<double(double)>& omega_sq,
                                                ode::State<2> init, std::span<const double> grid,
                                                double rel_tol) {
  check_rel_tol(rel_tol);
  auto rhs = [&](double t, const ode::State<2>& y) {
    return ode::State<2>{y[1], -damping * y[1] - omega_sq(t) * y[0]};
  };
  return ode::integrate<2>(rhs, init, grid, ode::Tolerances{rel_tol, rel_tol});
}

ResidualReport residual(const SystemParams& params, const ModeIndex& mode, const Trajectory& trajectory) {
  const Substitution s = substitution(params, mode);
  const auto& t = trajectory.times;
  const std::size_t count = t.size();
  if (count < 5) throw DomainError("residual needs at least 5 samples");
  if (trajectory.u.size() != count || trajectory.v.size() != count) {
    throw DomainError("trajectory columns have different lengths");
  }
  const double h = (t.back() - t.front()) / static_cast<double>(count - 1);
  if (!(h > 0.0)) throw DomainError("trajectory times must be increasing");
  for (std::size_t i = 1; i < count; ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) throw DomainError("residual requires a uniform grid");
  }
  if (h > 1e-2 * s.alpha) {
    throw GridTooCoarse("grid spacing " + std::to_string(h) + " exceeds 1e-2 alpha_n = " +
                        std::to_string(1e-2 * s.alpha));
  }

  const double L = params.L;
  ResidualReport report;
  auto line = [&](const std::vector<double>& f, std::size_t i, double sign) {
    const double d1 = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    const double d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
    const double w = omega_mode(params, mode, t[i]);
    return std::abs(d2 + sign * L * d1 + w * w * f[i]);
  };
  for (std::size_t i = 2; i + 2 < count; ++i) {
    const double ru = line(trajectory.u, i, +1.0);
    const double rv = line(trajectory.v, i, -1.0);
    if (ru > report.max_u) {
      report.max_u = ru;
      report.argmax_u = i;
    }
    if (rv > report.max_v) {
      report.max_v = rv;
      report.argmax_v = i;
    }
  }
  return report;
}

}  // namespace memdomain
