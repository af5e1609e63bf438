#pragma once

// Doubled-mode (A, A~) quantisation in a truncated two-mode Fock space.
//
// Basis |m_A, m_T> with 0 <= m_A, m_T <= cutoff, flattened as
// m_A * (cutoff + 1) + m_T. Ladder matrices are the truncated harmonic
// oscillator ones, so canonical commutators hold exactly on the interior
// (both occupations <= cutoff - 2) and fail only at the truncation edge.

#include <complex>
#include <span>
#include <vector>

#include "memdomain/linalg.hpp"
#include "memdomain/oscillator.hpp"

namespace memdomain::fock {

using linalg::Complex;
using linalg::CVector;
using linalg::SparseCMatrix;

enum class Mode { A, Tilde };

enum class OperatorLabel { H0, HI1, HI2, K2, NumberA, NumberTilde, H0Rotated, Ladder };

struct OperatorMatrix {
  OperatorLabel label = OperatorLabel::H0;
  int cutoff = 0;
  SparseCMatrix entries;
  [[nodiscard]] Eigen::Index dimension() const { return entries.rows(); }
};

/// Single-mode truncated annihilator, (cutoff+1) x (cutoff+1).
SparseCMatrix single_annihilator(int cutoff);

/// Two-mode annihilator of A or A~.
OperatorMatrix annihilator(int cutoff, Mode mode);

/// Number operator of A or A~ (diagonal).
OperatorMatrix number_operator(int cutoff, Mode mode);

/// Flat index of |m_A, m_T>.
Eigen::Index basis_index(int cutoff, int m_a, int m_tilde);

/// theta with tanh(theta) = -Omega_1 / Omega_0, where
/// Omega_{0,1} = w0 (Omega^2 / w0^2 +- 1).
struct SqueezeAngle {
  double theta = 0.0;
  ModeIndex mode;
  double t = 0.0;
  double omega0_coeff = 0.0;  ///< Omega_0
  double omega1_coeff = 0.0;  ///< Omega_1
};

/// Mixing angle from Omega^2 and the reference frequency w0. Throws ModeDead
/// when Omega^2 <= 0 (the ratio reaches 1).
double mixing_angle_from(double omega_sq, double omega0);

SqueezeAngle mixing_angle(const SystemParams& params, const ModeIndex& mode, double t);

struct HyperbolicPair {
  double c = 1.0;
  double s = 0.0;
};

/// (cosh(theta/2), sinh(theta/2)).
HyperbolicPair bogoliubov_theta_coeffs(double theta);

/// (cosh(gamma t), sinh(gamma t)).
HyperbolicPair bogoliubov_time_coeffs(double gamma, double t);

/// Truncated two-mode state supported on |m, m> only.
struct TwoModeState {
  int cutoff = 0;
  std::vector<Complex> coeffs;  ///< c_0 .. c_cutoff
  double gamma_t = 0.0;

  [[nodiscard]] double norm_sq() const;
};

/// Smallest cutoff with tanh^{2(m+1)}(gamma t) < 10^{-digits}, clamped to
/// [8, 256].
int default_cutoff(double gamma_t, double digits = 12.0);

/// |0(theta, t)> = (1/cosh) exp(tanh(gamma t) J_+) |0(theta)>, i.e.
/// c_m = tanh^m(gamma t) / cosh(gamma t). cutoff <= 0 selects
/// default_cutoff. Throws CutoffTooSmall when the neglected norm exceeds 1e-12.
TwoModeState squeezed_vacuum(double gamma, double t, int cutoff = 0);

/// Weight the truncation discards: tanh^{2(cutoff+1)}(gamma t).
double truncation_tail(double gamma_t, int cutoff);

struct PairNumbers {
  double n_a = 0.0;
  double n_tilde = 0.0;
};

PairNumbers expected_pair_number(const TwoModeState& state);

/// Embeds the paired coefficients into the full two-mode vector.
CVector to_vector(const TwoModeState& state);

/// Projects a full two-mode vector onto |m, m>. Throws DomainError if more
/// than `tolerance` of the squared norm lies off the paired diagonal.
TwoModeState from_vector(const CVector& vec, int cutoff, double gamma_t, double tolerance = 1e-12);

/// <a|b> of two truncated states (the shorter one fixes the range).
Complex inner_product(const TwoModeState& a, const TwoModeState& b);

/// ln prod_k 1/cosh(gamma_k (t - t')) evaluated stably.
double log_vacuum_overlap(std::span<const double> gammas, double t, double t_prime);

/// prod_k <0(theta,t')|0(theta,t)> = prod_k 1/cosh(gamma_k (t - t')).
double vacuum_overlap(std::span<const double> gammas, double t, double t_prime);

/// Local decay rate -d/dt ln <0(theta,t)|0(theta)> for a single mode,
/// computed as a symmetric secant of the log-overlap with half-width dt.
double vacuum_decay_rate(double gamma, double t, double dt = 1e-4);

struct Hamiltonians {
  OperatorMatrix h0;          ///< (1/2) Omega_0 (N_A - N_T)
  OperatorMatrix hi1;         ///< -(1/4) Omega_1 [(A^2 + A+^2) - (T^2 + T+^2)]
  OperatorMatrix hi2;         ///< i Gamma (A+ T+ - A T)
  OperatorMatrix h0_rotated;  ///< Omega (N_A - N_T)
  double omega = 0.0;
  double omega0_coeff = 0.0;
  double omega1_coeff = 0.0;
  double gamma = 0.0;  ///< L / 2
};

/// Throws ModeDead for t >= T_{k,n}; cutoff must be >= 4.
Hamiltonians build_hamiltonians(const SystemParams& params, const ModeIndex& mode, double t, int cutoff);

/// i Gamma (A+ T+ - A T) alone.
OperatorMatrix pair_generator(double gamma, int cutoff);

/// K_2 = (i/4) [(A^2 - A+^2) + (T^2 - T+^2)].
OperatorMatrix k2_generator(int cutoff);

/// exp(-i t G) applied to the embedded init state and projected back.
/// Throws CutoffTooSmall when more than 1e-8 of the norm sits in the top two
/// occupation levels of either mode.
TwoModeState brute_force_evolve(const OperatorMatrix& generator, double t, const TwoModeState& init);

/// exp(-i t G) v on the full two-mode space.
CVector evolve_vector(const OperatorMatrix& generator, double t, const CVector& v);

/// Squared norm carried by states with either occupation >= cutoff - 1.
double top_levels_weight(const CVector& v, int cutoff);

/// exp(-i theta K_2) A exp(i theta K_2) (or for A~) on the cutoff block.
/// K_2 splits into commuting single-mode parts, so the conjugation is done on
/// the single-mode factor in a padded working space large enough that the
/// truncation edge does not reach the returned block, then embedded.
OperatorMatrix conjugate_annihilator(double theta, int cutoff, Mode mode);

/// |0(theta)> = exp(-i theta K_2) |0, 0> on the cutoff space.
CVector rotated_vacuum(double theta, int cutoff);

/// Max-abs entry of [x, y] restricted to the interior (occupations <= cutoff-2).
double interior_commutator_max(const SparseCMatrix& x, const SparseCMatrix& y, int cutoff);

/// True if |m_A, m_T> lies in the interior block.
bool is_interior(int cutoff, Eigen::Index flat_index);

}  // namespace memdomain::fock
