#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step-size control.
//
// The integrator lands exactly on every requested output time, so no dense
// output is needed. Works for forward or backward (decreasing) grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memdomain/errors.hpp"

namespace memdomain::ode {

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-10;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

// Butcher tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [coef, k] : terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

}  // namespace detail

/// Integrates dy/dt = rhs(t, y) from grid[0] and returns the state at every
/// grid point (the first entry is y0). The grid must be strictly monotone.
template <std::size_t N, class Rhs>
std::vector<State<N>> integrate(Rhs&& rhs, const State<N>& y0, std::span<const double> grid,
                                Tolerances tol, Stats* stats = nullptr) {
  using namespace detail;
  constexpr double safety = 0.9;
  constexpr double reject_backoff = 0.5;
  constexpr double min_factor = 0.2;
  constexpr double max_factor = 5.0;
  // PI controller exponents for a 5(4) pair.
  constexpr double alpha = 0.7 / 5.0;
  constexpr double beta = 0.4 / 5.0;

  std::vector<State<N>> out;
  out.reserve(grid.size());
  if (grid.empty()) return out;
  out.push_back(y0);
  if (grid.size() == 1) return out;

  const double direction = grid[1] > grid[0] ? 1.0 : -1.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if ((grid[i] - grid[i - 1]) * direction <= 0.0) {
      throw DomainError("integration grid must be strictly monotone");
    }
  }

  Stats local;
  auto eval = [&](double t, const State<N>& y) {
    ++local.rhs_evaluations;
    return rhs(t, y);
  };

  double t = grid[0];
  State<N> y = y0;
  State<N> k1 = eval(t, y);
  double h = direction * std::min(std::abs(grid[1] - grid[0]), 1e-3 * std::max(1.0, std::abs(grid.back() - grid[0])));
  double err_prev = 1e-4;

  for (std::size_t target = 1; target < grid.size(); ++target) {
    const double t_end = grid[target];
    while ((t_end - t) * direction > 0.0) {
      const double remaining = t_end - t;
      const bool clamped = std::abs(h) >= std::abs(remaining);
      const double step = clamped ? remaining : h;
      if (std::abs(step) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t));
      }

      const State<N> k2 = eval(t + c2 * step, axpy<N>(y, step, {{a21, &k1}}));
      const State<N> k3 = eval(t + c3 * step, axpy<N>(y, step, {{a31, &k1}, {a32, &k2}}));
      const State<N> k4 = eval(t + c4 * step, axpy<N>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const State<N> k5 =
          eval(t + c5 * step, axpy<N>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const State<N> k6 = eval(t + step, axpy<N>(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const State<N> y_new = axpy<N>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State<N> k7 = eval(t + step, y_new);

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / sc);
      }

      if (err <= 1.0) {
        ++local.accepted;
        t = clamped ? t_end : t + step;
        y = y_new;
        k1 = k7;  // first-same-as-last
        double factor = safety * std::pow(std::max(err, 1e-10), -alpha) * std::pow(err_prev, beta);
        factor = std::clamp(factor, min_factor, max_factor);
        // A step cut short to hit the grid does not shrink the proposal.
        h = clamped ? direction * std::max(std::abs(h), std::abs(step) * factor) : step * factor;
        err_prev = std::max(err, 1e-4);
      } else {
        ++local.rejected;
        const double factor = std::max(min_factor, std::min(reject_backoff, safety * std::pow(err, -0.2)));
        h = step * factor;
      }
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace memdomain::ode
