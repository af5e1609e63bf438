#pragma once

// Recording windows, momentum thresholds, infrared cut-off (domain size) and
// the life-time function Lambda_{k,n}(t) of a memory mode.

#include <string>
#include <vector>

#include "memdomain/oscillator.hpp"

namespace memdomain {

/// T_{k,n} = ((2n+1)/L) ln(2 w0_k / L): the last instant at which the common
/// frequency is real. Zero when 2 w0_k == L; NeverRecordable when 2 w0_k < L.
double recording_window(const SystemParams& params, const ModeIndex& mode);

/// k~(n, t) = k0 exp(L t / (2n+1)).
double momentum_threshold(const SystemParams& params, int n, double t);

/// Infrared cut-off lambda~ = 2 pi / k~(n, t).
double domain_size(const SystemParams& params, int n, double t);

/// Lambda_{k,n}(t) from
///   exp(-2 Lambda) = exp(-g t) sinh(g (T - t)) / sinh(g T),  g = L/(2n+1).
/// Throws ModeDead for t >= T.
double lambda_lifetime(const SystemParams& params, const ModeIndex& mode, double t);

/// Omega(0) exp(-Lambda(t)). Equals the common frequency inside the window.
double frequency_from_lambda(const SystemParams& params, const ModeIndex& mode, double t);

/// True iff t < T_{k,n}. Never-recordable modes are never alive.
bool mode_alive(const SystemParams& params, const ModeIndex& mode, double t);

struct DomainSnapshot {
  int n = 0;
  double t = 0.0;
  double k_threshold = 0.0;
  double lambda_cutoff = 0.0;
  std::vector<double> alive_modes;  ///< members of the query set with k >= k_threshold
};

DomainSnapshot domain_snapshot(const SystemParams& params, int n, double t, const std::vector<double>& query);

struct LifetimeSample {
  double t = 0.0;
  double lambda = 0.0;
};

/// Lambda_{k,n} sampled on `samples` equally spaced points of [0, T) and
/// terminated at the first point where it exceeds `ceiling`. If the grid
/// ends below the ceiling, a final point with Lambda >= ceiling is located by
/// bisection and appended.
struct LifetimeProfile {
  ModeIndex mode;
  double window_T = 0.0;
  std::vector<LifetimeSample> samples;
};

LifetimeProfile lifetime_profile(const SystemParams& params, const ModeIndex& mode, int samples = 2000,
                                 double ceiling = 10.0);

enum class FigureId { Fig1, Fig2, Fig3, Fig4 };

std::string to_string(FigureId id);
FigureId figure_from_string(const std::string& name);

/// Curve family: every (k, n) in ks x ns.
struct FigureSpec {
  FigureId which = FigureId::Fig1;
  std::vector<double> ks;
  std::vector<int> ns;
  int samples = 2000;
  double ceiling = 10.0;
};

/// Defaults with L = c = 1:
///   fig1: n = 1, k in {0.6, 0.8, 6, 8} (k1 = k3/10, k2 = k4/10)
///   fig2: k = 2, n in {1..5}
///   fig3: k = 0.55, n in {1,3,5,7,9}
///   fig4: k = 55,   n in {1,3,5,7,9}
FigureSpec default_figure_spec(FigureId which);

struct CurveInfo {
  std::string curve_id;
  ModeIndex mode;
  double window_T = 0.0;
};

struct CurveRow {
  std::string curve_id;
  double t = 0.0;
  double lambda = 0.0;
};

struct CurveTable {
  std::vector<CurveInfo> curves;  ///< sorted by curve_id
  std::vector<CurveRow> rows;     ///< grouped by curve, increasing t
};

/// Curve identifier "NN:k=<k>:n=<n>" with a zero-padded ordinal, so sorting
/// by identifier keeps the specification order.
std::string curve_id(std::size_t ordinal, const ModeIndex& mode);

/// Throws NeverRecordable if any requested mode has an empty window.
CurveTable curve_table(const SystemParams& params, const FigureSpec& spec);

}  // namespace memdomain
