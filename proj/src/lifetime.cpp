#include "memdomain/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "memdomain/errors.hpp"
#include "memdomain/parallel.hpp"

namespace memdomain {
namespace {

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
}

double decay_rate(const SystemParams& params, int n) { return params.L / (2.0 * n + 1.0); }

}  // namespace

double recording_window(const SystemParams& params, const ModeIndex& mode) {
  params.validate();
  mode.validate();
  const double ratio = 2.0 * params.omega0(mode.k) / params.L;
  if (ratio < 1.0) {
    throw NeverRecordable("2 omega0 = " + std::to_string(2.0 * params.omega0(mode.k)) + " is below L = " +
                          std::to_string(params.L) + ": the mode is never recordable");
  }
  return (2.0 * mode.n + 1.0) / params.L * std::log(ratio);
}

double momentum_threshold(const SystemParams& params, int n, double t) {
  params.validate();
  ModeIndex{1.0, n}.validate();
  check_time(t);
  return params.k0() * std::exp(decay_rate(params, n) * t);
}

double domain_size(const SystemParams& params, int n, double t) {
  return 2.0 * std::numbers::pi / momentum_threshold(params, n, t);
}

double lambda_lifetime(const SystemParams& params, const ModeIndex& mode, double t) {
  check_time(t);
  const double window = recording_window(params, mode);
  if (t >= window) {
    throw ModeDead("mode (k=" + std::to_string(mode.k) + ", n=" + std::to_string(mode.n) + ") is dead at t = " +
                   std::to_string(t) + " (window ends at " + std::to_string(window) + ")");
  }
  const double g = decay_rate(params, mode.n);
  const double ratio = std::sinh(g * window) / std::sinh(g * (window - t));
  return 0.5 * (g * t + std::log(ratio));
}

double frequency_from_lambda(const SystemParams& params, const ModeIndex& mode, double t) {
  const double lambda = lambda_lifetime(params, mode, t);
  return common_frequency(params, mode, 0.0) * std::exp(-lambda);
}

bool mode_alive(const SystemParams& params, const ModeIndex& mode, double t) {
  check_time(t);
  params.validate();
  mode.validate();
  if (2.0 * params.omega0(mode.k) < params.L) return false;
  return t < recording_window(params, mode);
}

DomainSnapshot domain_snapshot(const SystemParams& params, int n, double t, const std::vector<double>& query) {
  DomainSnapshot snap;
  snap.n = n;
  snap.t = t;
  snap.k_threshold = momentum_threshold(params, n, t);
  snap.lambda_cutoff = 2.0 * std::numbers::pi / snap.k_threshold;
  for (double k : query) {
    if (k >= snap.k_threshold) snap.alive_modes.push_back(k);
  }
  return snap;
}

LifetimeProfile lifetime_profile(const SystemParams& params, const ModeIndex& mode, int samples, double ceiling) {
  if (samples < 2) throw DomainError("a lifetime profile needs at least two samples");
  if (!(ceiling > 0.0)) throw DomainError("plot ceiling must be > 0");
  LifetimeProfile profile;
  profile.mode = mode;
  profile.window_T = recording_window(params, mode);
  if (!(profile.window_T > 0.0)) {
    throw NeverRecordable("mode (k=" + std::to_string(mode.k) + ", n=" + std::to_string(mode.n) +
                          ") has an empty recording window");
  }
  const double window = profile.window_T;
  profile.samples.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i < samples; ++i) {
    const double t = window * static_cast<double>(i) / static_cast<double>(samples);
    const double lambda = lambda_lifetime(params, mode, t);
    profile.samples.push_back({t, lambda});
    if (lambda > ceiling) return profile;
  }
  // Locate the ceiling crossing between the last grid point and T.
  double lo = profile.samples.back().t;
  double hi = window;
  for (int iter = 0; iter < 200 && hi > lo; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (lambda_lifetime(params, mode, mid) >= ceiling) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double t_end = hi;
  if (t_end >= window) t_end = std::nextafter(window, 0.0);
  profile.samples.push_back({t_end, lambda_lifetime(params, mode, t_end)});
  return profile;
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::Fig1: return "fig1";
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
  }
  return "fig?";
}

FigureId figure_from_string(const std::string& name) {
  if (name == "fig1") return FigureId::Fig1;
  if (name == "fig2") return FigureId::Fig2;
  if (name == "fig3") return FigureId::Fig3;
  if (name == "fig4") return FigureId::Fig4;
  throw DomainError("unknown figure '" + name + "' (expected fig1..fig4)");
}

FigureSpec default_figure_spec(FigureId which) {
  FigureSpec spec;
  spec.which = which;
  switch (which) {
    case FigureId::Fig1:
      spec.ks = {0.6, 0.8, 6.0, 8.0};
      spec.ns = {1};
      break;
    case FigureId::Fig2:
      spec.ks = {2.0};
      spec.ns = {1, 2, 3, 4, 5};
      break;
    case FigureId::Fig3:
      spec.ks = {0.55};
      spec.ns = {1, 3, 5, 7, 9};
      break;
    case FigureId::Fig4:
      spec.ks = {55.0};
      spec.ns = {1, 3, 5, 7, 9};
      break;
  }
  return spec;
}

std::string curve_id(std::size_t ordinal, const ModeIndex& mode) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%02zu:k=%.17g:n=%d", ordinal, mode.k, mode.n);
  return buf;
}

CurveTable curve_table(const SystemParams& params, const FigureSpec& spec) {
  if (spec.ks.empty() || spec.ns.empty()) throw DomainError("figure spec needs at least one k and one n");
  CurveTable table;
  for (double k : spec.ks) {
    for (int n : spec.ns) {
      const ModeIndex mode{k, n};
      CurveInfo info;
      info.curve_id = curve_id(table.curves.size() + 1, mode);
      info.mode = mode;
      info.window_T = recording_window(params, mode);
      if (!(info.window_T > 0.0)) {
        throw NeverRecordable("curve " + info.curve_id + " is never recordable");
      }
      table.curves.push_back(info);
    }
  }
  std::sort(table.curves.begin(), table.curves.end(),
            [](const CurveInfo& a, const CurveInfo& b) { return a.curve_id < b.curve_id; });

  std::vector<LifetimeProfile> profiles(table.curves.size());
  parallel_for(profiles.size(), [&](std::size_t i) {
    profiles[i] = lifetime_profile(params, table.curves[i].mode, spec.samples, spec.ceiling);
  });
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (const auto& s : profiles[i].samples) table.rows.push_back({table.curves[i].curve_id, s.t, s.lambda});
  }
  return table;
}

}  // namespace memdomain
