#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "memdomain/errors.hpp"
#include "memdomain/lifetime.hpp"
#include "memdomain/oscillator.hpp"
#include "memdomain/special_functions.hpp"
#include "oracles.hpp"

using namespace memdomain;

namespace {
const SystemParams kUnit{1.0, 1.0};

double second_derivative_u(const SystemParams& p, const ModeIndex& m, BesselCoeffs c, double t, double h) {
  return oracle::richardson_derivative([&](double s) { return closed_form_state(p, m, c, s).du; }, t, h);
}
double second_derivative_v(const SystemParams& p, const ModeIndex& m, BesselCoeffs c, double t, double h) {
  return oracle::richardson_derivative([&](double s) { return closed_form_state(p, m, c, s).dv; }, t, h);
}
}  // namespace

TEST_CASE("graded frequency examples") {
  CHECK(omega_mode(kUnit, {2.0, 1}, 0.0) == 2.0);
  CHECK(omega_mode(kUnit, {2.0, 1}, 3.0 * std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(omega_mode(kUnit, {2.0, 1000000}, 5.0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(common_frequency(kUnit, {2.0, 1}, 0.0) == doctest::Approx(std::sqrt(3.75)).epsilon(1e-15));
  CHECK(common_frequency(kUnit, {2.0, 1}, 3.0 * std::log(2.0)) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  CHECK(std::abs(common_frequency_sq(kUnit, {2.0, 1}, 3.0 * std::log(4.0))) < 1e-15);
  CHECK_THROWS_AS(common_frequency(kUnit, {2.0, 1}, 5.0), RealityViolation);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModeIndex{1.0, -1}.validate()), UnsupportedBranch);
  CHECK_THROWS_AS((ModeIndex{0.0, 1}.validate()), DomainError);
  CHECK_THROWS_AS((SystemParams{0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((SystemParams{1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS(closed_form_pair(kUnit, {1.0, -2}, {}, 0.0), UnsupportedBranch);
  CHECK(kUnit.k0() == 0.5);
}

TEST_CASE("grading is monotone in n") {
  for (double t : {0.1, 1.0, 4.0}) {
    for (int n = 0; n < 20; ++n) CHECK(omega_mode(kUnit, {2.0, n}, t) < omega_mode(kUnit, {2.0, n + 1}, t));
  }
}

TEST_CASE("substitution recovers L and w0 independently of n") {
  // Exactly representable ratios are bit-identical; generic L within an ulp or two.
  for (double L : {1.0, 0.5, 2.0, 0.25}) {
    const SystemParams p{L, 1.0};
    for (int n = 0; n <= 40; ++n) {
      const Substitution s = substitution(p, {3.0, n});
      CHECK((2 * n + 1) / s.alpha == L);
      CHECK(s.epsilon / s.alpha == 3.0);
    }
  }
  for (double L : {0.3, 1.7, 0.123}) {
    const SystemParams p{L, 1.0};
    for (int n = 0; n <= 40; ++n) {
      const Substitution s = substitution(p, {3.0, n});
      CHECK(std::abs((2 * n + 1) / s.alpha - L) <= 2 * std::numeric_limits<double>::epsilon() * L);
    }
  }
  const Substitution s = substitution(kUnit, {2.0, 1});
  CHECK(s.x(0.0) == 1.0);
  CHECK(s.x(100.0) > 0.0);
  CHECK(s.x(100.0) < 1.0);
}

TEST_CASE("closed form at t = 0 and linearity") {
  for (int n = 0; n < 6; ++n) {
    const ModeIndex m{2.0, n};
    const Substitution s = substitution(kUnit, m);
    const PairValue pv = closed_form_pair(kUnit, m, {1.0, 0.0}, 0.0);
    CHECK(pv.u == doctest::Approx(special::sph_j(n, s.epsilon)).epsilon(1e-15));
    CHECK(pv.v == doctest::Approx(special::sph_j(n, s.epsilon)).epsilon(1e-15));
    const PairValue one = closed_form_pair(kUnit, m, {0.3, -0.7}, 1.3);
    const PairValue two = closed_form_pair(kUnit, m, {0.6, -1.4}, 1.3);
    CHECK(two.u == 2.0 * one.u);
    CHECK(two.v == 2.0 * one.v);
  }
  const double t = 0.8;
  const double x = std::exp(-t);
  CHECK(closed_form_pair(kUnit, {2.0, 0}, {}, t).u ==
        doctest::Approx(std::sin(2 * x) / (2 * x) * x).epsilon(1e-14));
}

TEST_CASE("radius from either branch") {
  const ModeIndex m{2.0, 1};
  CHECK(parametric_radius(kUnit, m, {}, 0.0) ==
        doctest::Approx(std::sqrt(2.0) * special::sph_j(1, substitution(kUnit, m).epsilon)));
  for (double t : {0.5, 2.0, 3.9}) {
    const double a = parametric_radius(kUnit, m, {}, t);
    const double b = parametric_radius_from_v(kUnit, m, {}, t);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
  const auto grid = uniform_grid(0.0, 3.0, 301);
  const Trajectory tr = closed_form_trajectory(kUnit, m, {}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double uv = tr.u[i] * tr.v[i];
    CHECK(std::abs(uv - 0.5 * tr.r[i] * tr.r[i]) <= 1e-8 * std::max(std::abs(uv), 1e-300));
  }
}

TEST_CASE("substitution identity at random times") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n <= 10; ++n) {
    for (double k : {0.7, 2.0, 6.0}) {
      const ModeIndex m{k, n};
      const double T = recording_window(kUnit, m);
      const Substitution s = substitution(kUnit, m);
      for (int i = 0; i < 200; ++i) {
        const double t = unit(rng) * T;
        const auto jet = oracle::branch_jet(
            n, s.alpha, s.epsilon, t, [&](double z) { return special::sph_j(n, z); },
            [&](double z) { return special::sph_deriv(special::BesselKind::FirstKind, n, z); });
        const PairState st = closed_form_state(kUnit, m, {}, t);
        const double w2 = std::pow(omega_mode(kUnit, m, t), 2);
        const double ru = jet.ddu + kUnit.L * jet.du + w2 * jet.u;
        const double rv = jet.ddv - kUnit.L * jet.dv + w2 * jet.v;
        INFO("n=" << n << " k=" << k << " t=" << t);
        CHECK(std::abs(ru) <= 1e-8 * (1.0 + std::abs(jet.u)));
        CHECK(std::abs(rv) <= 1e-8 * (1.0 + std::abs(jet.v)));
        CHECK(std::abs(st.u - jet.u) <= 1e-12 * (1.0 + std::abs(jet.u)));
        CHECK(std::abs(st.du - jet.du) <= 1e-12 * (1.0 + std::abs(jet.du)));
        CHECK(std::abs(st.dv - jet.dv) <= 1e-12 * (1.0 + std::abs(jet.dv)));
      }
    }
  }
}

TEST_CASE("analytic derivatives agree with differences of the values") {
  const ModeIndex m{2.0, 3};
  const BesselCoeffs c{0.4, 0.9};
  for (double t : {0.3, 1.7, 5.0}) {
    const PairState st = closed_form_state(kUnit, m, c, t);
    const double du = oracle::richardson_derivative([&](double s) { return closed_form_pair(kUnit, m, c, s).u; }, t, 0.01);
    const double dv = oracle::richardson_derivative([&](double s) { return closed_form_pair(kUnit, m, c, s).v; }, t, 0.01);
    CHECK(std::abs(st.du - du) <= 1e-9 * (1.0 + std::abs(st.du)));
    CHECK(std::abs(st.dv - dv) <= 1e-9 * (1.0 + std::abs(st.dv)));
  }
}

TEST_CASE("radius obeys the undamped parametric equation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {0, 1, 4}) {
    const ModeIndex m{2.0, n};
    const double T = recording_window(kUnit, m);
    auto rdot = [&](double s) {
      const PairState st = closed_form_state(kUnit, m, {}, s);
      return std::sqrt(2.0) * std::exp(0.5 * kUnit.L * s) * (st.du + 0.5 * kUnit.L * st.u);
    };
    for (int i = 0; i < 100; ++i) {
      const double t = 0.01 + unit(rng) * (T - 0.02);
      const double r = parametric_radius(kUnit, m, {}, t);
      const double res = oracle::richardson_derivative(rdot, t, 0.01) + common_frequency_sq(kUnit, m, t) * r;
      CHECK(std::abs(res) <= 1e-8 * (1.0 + std::abs(r)));
    }
  }
}

TEST_CASE("Wronskian of two independent radii is constant") {
  const ModeIndex m{3.0, 2};
  const double T = recording_window(kUnit, m);
  auto wronskian = [&](double t) {
    const PairState a = closed_form_state(kUnit, m, {1.0, 0.0}, t);
    const PairState b = closed_form_state(kUnit, m, {0.0, 1.0}, t);
    return 2.0 * std::exp(kUnit.L * t) * (a.u * b.du - a.du * b.u);
  };
  const double w0 = wronskian(0.0);
  CHECK(std::abs(w0) > 0.0);
  for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 0.999}) CHECK(std::abs(wronskian(f * T) - w0) <= 1e-8 * std::abs(w0));
}

TEST_CASE("integrator matches the closed form over the window") {
  // Above n = 4 the v branch grows like x^-n, so the tolerance is tightened to
  // keep the absolute deviation bounded.
  for (int n = 0; n <= 10; ++n) {
    const ModeIndex m{2.0, n};
    const double tol = n <= 4 ? 1e-10 : 1e-13;
    const double T = recording_window(kUnit, m);
    const auto grid = uniform_grid(0.0, T, 401);
    const Trajectory closed = closed_form_trajectory(kUnit, m, {}, grid);
    const Trajectory ode = integrate_pair(kUnit, m, closed_form_state(kUnit, m, {}, 0.0), grid, tol);
    CHECK(ode.method == TrajectoryMethod::Integrated);
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      dev = std::max({dev, std::abs(closed.u[i] - ode.u[i]), std::abs(closed.v[i] - ode.v[i])});
    }
    INFO("n=" << n);
    CHECK(dev <= 1e-6);
  }
  // n = 0 example on [0, 3].
  const ModeIndex m0{2.0, 0};
  const auto grid = uniform_grid(0.0, 3.0, 301);
  const Trajectory ode = integrate_pair(kUnit, m0, closed_form_state(kUnit, m0, {}, 0.0), grid, 1e-10);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = std::exp(-grid[i]);
    CHECK(std::abs(ode.u[i] - std::sin(2 * x) / 2.0) <= 1e-6);
  }
}

TEST_CASE("integrator edge cases") {
  const ModeIndex m{2.0, 1};
  const auto grid = uniform_grid(0.0, 3.0, 31);
  const Trajectory zero = integrate_pair(kUnit, m, PairState{}, grid, 1e-10);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(zero.u[i] == 0.0);
    CHECK(zero.v[i] == 0.0);
  }
  CHECK_THROWS_AS(integrate_pair(kUnit, m, PairState{}, grid, 1e-14), DomainError);
  CHECK_THROWS_AS(integrate_pair(kUnit, m, PairState{}, grid, 1e-2), DomainError);
  const std::vector<double> backwards{1.0, 0.5};
  CHECK_THROWS_AS(integrate_pair(kUnit, m, PairState{}, backwards, 1e-10), DomainError);

  // Deterministic for fixed inputs.
  const PairState init = closed_form_state(kUnit, m, {}, 0.0);
  ode::Stats s1, s2;
  const Trajectory a = integrate_pair(kUnit, m, init, grid, 1e-9, &s1);
  const Trajectory b = integrate_pair(kUnit, m, init, grid, 1e-9, &s2);
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
  CHECK(s1.accepted == s2.accepted);
  CHECK(s1.accepted > 0);
}

TEST_CASE("time reversal maps the amplified branch onto the damped one") {
  // v'' - L v' + w(t)^2 v = 0 forward on [0, 3]; with s = -t the same function
  // obeys u'' + L u' + w(-s)^2 u = 0, integrated backwards from s = 0 to -3.
  const ModeIndex m{2.0, 1};
  const PairState init = closed_form_state(kUnit, m, {}, 0.0);
  const auto fwd = uniform_grid(0.0, 3.0, 61);
  std::vector<double> bwd(fwd.size());
  for (std::size_t i = 0; i < fwd.size(); ++i) bwd[i] = -fwd[i];
  auto w2 = [&](double t) { return std::pow(omega_mode(kUnit, m, t), 2); };
  const auto v = integrate_oscillator(-kUnit.L, w2, {init.v, init.dv}, fwd, 1e-11);
  const auto u = integrate_oscillator(kUnit.L, [&](double s) { return w2(-s); }, {init.v, -init.dv}, bwd, 1e-11);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    CHECK(std::abs(u[i][0] - v[i][0]) <= 1e-6);
    CHECK(std::abs(u[i][1] + v[i][1]) <= 1e-6);
  }
}

TEST_CASE("finite-difference residual") {
  const ModeIndex m{2.0, 1};
  const auto grid = uniform_grid(0.0, 3.0, 2001);
  Trajectory tr = closed_form_trajectory(kUnit, m, {}, grid);
  ResidualReport rep = residual(kUnit, m, tr);
  CHECK(rep.max_u <= 1e-8);
  CHECK(rep.max_v <= 1e-8);

  tr.u[1000] += 1e-3;
  rep = residual(kUnit, m, tr);
  CHECK(rep.max_u > 1e-3);
  CHECK(rep.argmax_u >= 998);
  CHECK(rep.argmax_u <= 1002);

  Trajectory zero = tr;
  std::fill(zero.u.begin(), zero.u.end(), 0.0);
  std::fill(zero.v.begin(), zero.v.end(), 0.0);
  rep = residual(kUnit, m, zero);
  CHECK(rep.max_u == 0.0);
  CHECK(rep.max_v == 0.0);

  const auto coarse = uniform_grid(0.0, 3.0, 51);
  CHECK_THROWS_AS(residual(kUnit, m, closed_form_trajectory(kUnit, m, {}, coarse)), GridTooCoarse);
}
