#include "memdomain/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memdomain/errors.hpp"
#include "memdomain/lifetime.hpp"

namespace memdomain::fock {
namespace {

using linalg::CMatrix;
using linalg::kron;
using linalg::sparse_identity;
using Triplet = Eigen::Triplet<Complex>;

constexpr Complex kI{0.0, 1.0};

void check_cutoff(int cutoff, int minimum) {
  if (cutoff < minimum) {
    throw DomainError("cutoff must be >= " + std::to_string(minimum) + ", got " + std::to_string(cutoff));
  }
}

SparseCMatrix adjoint(const SparseCMatrix& m) { return SparseCMatrix(m.adjoint()); }

SparseCMatrix embed(const SparseCMatrix& single, int cutoff, Mode mode) {
  const SparseCMatrix id = sparse_identity(cutoff + 1);
  return mode == Mode::A ? kron(single, id) : kron(id, single);
}

// ln cosh(x) without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// (i/4)(a^2 - a+^2) for one mode.
SparseCMatrix single_k2(int cutoff) {
  const SparseCMatrix a = single_annihilator(cutoff);
  const SparseCMatrix a2 = a * a;
  return SparseCMatrix((a2 - adjoint(a2)) * Complex(0.0, 0.25));
}

// Columns 0..columns-1 of exp(i theta k) on levels 0..work, k = single_k2.
// k only couples m with m+2. On each parity chain the phases i^j (m = p + 2j)
// make it real symmetric tridiagonal with off-diagonal -sqrt((m+1)(m+2))/4,
// which is diagonalised directly.
CMatrix k2_propagator_columns(double theta, int work, int columns) {
  static const Complex kPow[4] = {1.0, kI, -1.0, -kI};
  CMatrix out = CMatrix::Zero(work + 1, columns);
  for (int parity = 0; parity < 2; ++parity) {
    const int len = (work - parity) / 2 + 1;
    const Eigen::VectorXd diag = Eigen::VectorXd::Zero(len);
    Eigen::VectorXd sub(len - 1);
    for (int j = 0; j + 1 < len; ++j) {
      const double m = parity + 2.0 * j;
      sub(j) = -0.25 * std::sqrt((m + 1.0) * (m + 2.0));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw Error("tridiagonal eigensolver did not converge");
    const Eigen::MatrixXcd q = es.eigenvectors().cast<Complex>();
    CVector phase(len);
    for (int i = 0; i < len; ++i) phase(i) = std::exp(Complex(0.0, theta * es.eigenvalues()(i)));
    for (int jc = 0; jc < len && parity + 2 * jc < columns; ++jc) {
      const CVector col = q * phase.cwiseProduct(q.row(jc).transpose());
      const Complex back = std::conj(kPow[jc % 4]);
      for (int jr = 0; jr < len; ++jr) out(parity + 2 * jr, parity + 2 * jc) = kPow[jr % 4] * col(jr) * back;
    }
  }
  return out;
}

}  // namespace

SparseCMatrix single_annihilator(int cutoff) {
  check_cutoff(cutoff, 1);
  std::vector<Triplet> t;
  for (int m = 1; m <= cutoff; ++m) t.emplace_back(m - 1, m, std::sqrt(static_cast<double>(m)));
  SparseCMatrix a(cutoff + 1, cutoff + 1);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

OperatorMatrix annihilator(int cutoff, Mode mode) {
  return {OperatorLabel::Ladder, cutoff, embed(single_annihilator(cutoff), cutoff, mode)};
}

OperatorMatrix number_operator(int cutoff, Mode mode) {
  check_cutoff(cutoff, 1);
  std::vector<Triplet> t;
  for (int m = 1; m <= cutoff; ++m) t.emplace_back(m, m, static_cast<double>(m));
  SparseCMatrix n(cutoff + 1, cutoff + 1);
  n.setFromTriplets(t.begin(), t.end());
  return {mode == Mode::A ? OperatorLabel::NumberA : OperatorLabel::NumberTilde, cutoff, embed(n, cutoff, mode)};
}

Eigen::Index basis_index(int cutoff, int m_a, int m_tilde) {
  return static_cast<Eigen::Index>(m_a) * (cutoff + 1) + m_tilde;
}

bool is_interior(int cutoff, Eigen::Index flat_index) {
  const Eigen::Index stride = cutoff + 1;
  return flat_index / stride <= cutoff - 2 && flat_index % stride <= cutoff - 2;
}

double mixing_angle_from(double omega_sq, double omega0) {
  if (!(omega0 > 0.0)) throw DomainError("reference frequency must be > 0");
  if (!(omega_sq > 0.0)) {
    throw ModeDead("mixing angle diverges: common frequency has vanished (Omega^2 = " + std::to_string(omega_sq) + ")");
  }
  const double w2 = omega0 * omega0;
  return std::atanh((w2 - omega_sq) / (w2 + omega_sq));
}

SqueezeAngle mixing_angle(const SystemParams& params, const ModeIndex& mode, double t) {
  const double omega_sq = common_frequency_sq(params, mode, t);
  const double w0 = params.omega0(mode.k);
  SqueezeAngle out;
  out.mode = mode;
  out.t = t;
  out.theta = mixing_angle_from(omega_sq, w0);
  out.omega0_coeff = w0 * (omega_sq / (w0 * w0) + 1.0);
  out.omega1_coeff = w0 * (omega_sq / (w0 * w0) - 1.0);
  return out;
}

HyperbolicPair bogoliubov_theta_coeffs(double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  return {std::cosh(0.5 * theta), std::sinh(0.5 * theta)};
}

HyperbolicPair bogoliubov_time_coeffs(double gamma, double t) {
  if (!std::isfinite(gamma) || !std::isfinite(t)) throw DomainError("gamma and t must be finite");
  return {std::cosh(gamma * t), std::sinh(gamma * t)};
}

double TwoModeState::norm_sq() const {
  double s = 0.0;
  for (const Complex& c : coeffs) s += std::norm(c);
  return s;
}

double truncation_tail(double gamma_t, int cutoff) {
  const double th = std::tanh(std::abs(gamma_t));
  return std::pow(th * th, cutoff + 1);
}

int default_cutoff(double gamma_t, double digits) {
  const double th2 = std::pow(std::tanh(std::abs(gamma_t)), 2);
  if (th2 <= 0.0) return 8;
  const double needed = std::ceil(digits * std::numbers::ln10 / -std::log(th2)) - 1.0;
  return static_cast<int>(std::clamp(needed, 8.0, 256.0));
}

TwoModeState squeezed_vacuum(double gamma, double t, int cutoff) {
  if (!std::isfinite(gamma) || !std::isfinite(t)) throw DomainError("gamma and t must be finite");
  const double gt = gamma * t;
  if (cutoff <= 0) cutoff = default_cutoff(gt);
  check_cutoff(cutoff, 1);
  const double tail = truncation_tail(gt, cutoff);
  if (tail > 1e-12) {
    throw CutoffTooSmall("cutoff " + std::to_string(cutoff) + " drops " + std::to_string(tail) +
                         " of the norm at gamma*t = " + std::to_string(gt) + " (limit 1e-12)");
  }
  TwoModeState state;
  state.cutoff = cutoff;
  state.gamma_t = gt;
  state.coeffs.resize(static_cast<std::size_t>(cutoff) + 1);
  const double th = std::tanh(gt);
  double c = 1.0 / std::cosh(gt);
  for (int m = 0; m <= cutoff; ++m) {
    state.coeffs[m] = c;
    c *= th;
  }
  return state;
}

PairNumbers expected_pair_number(const TwoModeState& state) {
  PairNumbers out;
  for (std::size_t m = 0; m < state.coeffs.size(); ++m) {
    const double w = std::norm(state.coeffs[m]);
    out.n_a += static_cast<double>(m) * w;      // occupation of A in |m, m>
    out.n_tilde += static_cast<double>(m) * w;  // occupation of A~ in |m, m>
  }
  return out;
}

CVector to_vector(const TwoModeState& state) {
  const Eigen::Index dim = static_cast<Eigen::Index>(state.cutoff + 1) * (state.cutoff + 1);
  CVector v = CVector::Zero(dim);
  for (int m = 0; m <= state.cutoff; ++m) v(basis_index(state.cutoff, m, m)) = state.coeffs[m];
  return v;
}

TwoModeState from_vector(const CVector& vec, int cutoff, double gamma_t, double tolerance) {
  const Eigen::Index dim = static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1);
  if (vec.size() != dim) throw DomainError("vector dimension does not match cutoff");
  TwoModeState state;
  state.cutoff = cutoff;
  state.gamma_t = gamma_t;
  state.coeffs.resize(static_cast<std::size_t>(cutoff) + 1);
  double on_diagonal = 0.0;
  for (int m = 0; m <= cutoff; ++m) {
    state.coeffs[m] = vec(basis_index(cutoff, m, m));
    on_diagonal += std::norm(state.coeffs[m]);
  }
  const double off_diagonal = vec.squaredNorm() - on_diagonal;
  if (off_diagonal > tolerance * std::max(1.0, vec.squaredNorm())) {
    throw DomainError("state leaves the paired sector N_A = N_T (off-diagonal weight " +
                      std::to_string(off_diagonal) + ")");
  }
  return state;
}

Complex inner_product(const TwoModeState& a, const TwoModeState& b) {
  const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  Complex s = 0.0;
  for (std::size_t m = 0; m < n; ++m) s += std::conj(a.coeffs[m]) * b.coeffs[m];
  return s;
}

double log_vacuum_overlap(std::span<const double> gammas, double t, double t_prime) {
  if (!std::isfinite(t) || !std::isfinite(t_prime) || t < 0.0 || t_prime < 0.0) {
    throw DomainError("overlap times must be finite and >= 0");
  }
  double s = 0.0;
  for (double g : gammas) {
    if (!std::isfinite(g)) throw DomainError("gamma must be finite");
    s -= log_cosh(g * (t - t_prime));
  }
  return s;
}

double vacuum_overlap(std::span<const double> gammas, double t, double t_prime) {
  return std::exp(log_vacuum_overlap(gammas, t, t_prime));
}

double vacuum_decay_rate(double gamma, double t, double dt) {
  if (!(dt > 0.0) || t - dt < 0.0) throw DomainError("need 0 < dt <= t");
  const double g[] = {gamma};
  const double hi = log_vacuum_overlap(g, t + dt, 0.0);
  const double lo = log_vacuum_overlap(g, t - dt, 0.0);
  return -(hi - lo) / (2.0 * dt);
}

OperatorMatrix pair_generator(double gamma, int cutoff) {
  check_cutoff(cutoff, 1);
  const SparseCMatrix a = annihilator(cutoff, Mode::A).entries;
  const SparseCMatrix at = annihilator(cutoff, Mode::Tilde).entries;
  const SparseCMatrix lower = a * at;
  const SparseCMatrix raise = adjoint(lower);
  return {OperatorLabel::HI2, cutoff, SparseCMatrix((raise - lower) * (kI * gamma))};
}

OperatorMatrix k2_generator(int cutoff) {
  check_cutoff(cutoff, 4);
  const SparseCMatrix k = single_k2(cutoff);
  const SparseCMatrix id = sparse_identity(cutoff + 1);
  return {OperatorLabel::K2, cutoff, SparseCMatrix(kron(k, id) + kron(id, k))};
}

Hamiltonians build_hamiltonians(const SystemParams& params, const ModeIndex& mode, double t, int cutoff) {
  check_cutoff(cutoff, 4);
  if (!mode_alive(params, mode, t)) {
    throw ModeDead("Hamiltonians requested outside the recording window (t = " + std::to_string(t) + ")");
  }
  Hamiltonians h;
  const double omega_sq = common_frequency_sq(params, mode, t);
  const double w0 = params.omega0(mode.k);
  h.omega = std::sqrt(omega_sq);
  h.omega0_coeff = w0 * (omega_sq / (w0 * w0) + 1.0);
  h.omega1_coeff = w0 * (omega_sq / (w0 * w0) - 1.0);
  h.gamma = 0.5 * params.L;

  const SparseCMatrix a = annihilator(cutoff, Mode::A).entries;
  const SparseCMatrix at = annihilator(cutoff, Mode::Tilde).entries;
  const SparseCMatrix number_diff = number_operator(cutoff, Mode::A).entries - number_operator(cutoff, Mode::Tilde).entries;
  const SparseCMatrix a2 = a * a;
  const SparseCMatrix at2 = at * at;
  const SparseCMatrix quad = (a2 + adjoint(a2)) - (at2 + adjoint(at2));

  h.h0 = {OperatorLabel::H0, cutoff, SparseCMatrix(number_diff * Complex(0.5 * h.omega0_coeff))};
  h.hi1 = {OperatorLabel::HI1, cutoff, SparseCMatrix(quad * Complex(-0.25 * h.omega1_coeff))};
  h.hi2 = pair_generator(h.gamma, cutoff);
  h.h0_rotated = {OperatorLabel::H0Rotated, cutoff, SparseCMatrix(number_diff * Complex(h.omega))};
  return h;
}

double top_levels_weight(const CVector& v, int cutoff) {
  double w = 0.0;
  for (int ma = 0; ma <= cutoff; ++ma) {
    for (int mt = 0; mt <= cutoff; ++mt) {
      if (ma >= cutoff - 1 || mt >= cutoff - 1) w += std::norm(v(basis_index(cutoff, ma, mt)));
    }
  }
  return w;
}

CVector evolve_vector(const OperatorMatrix& generator, double t, const CVector& v) {
  if (v.size() != generator.dimension()) throw DomainError("state dimension does not match generator");
  return linalg::expm_action(generator.entries, Complex(0.0, -t), v);
}

TwoModeState brute_force_evolve(const OperatorMatrix& generator, double t, const TwoModeState& init) {
  if (init.cutoff != generator.cutoff) throw DomainError("state and generator cutoffs differ");
  if (t == 0.0) return init;
  const CVector out = evolve_vector(generator, t, to_vector(init));
  const double leak = top_levels_weight(out, generator.cutoff);
  if (leak > 1e-8) {
    throw CutoffTooSmall("evolution leaks " + std::to_string(leak) + " of the norm into the top two levels");
  }
  TwoModeState state = from_vector(out, generator.cutoff, init.gamma_t, 1e-10);
  return state;
}

OperatorMatrix conjugate_annihilator(double theta, int cutoff, Mode mode) {
  check_cutoff(cutoff, 4);
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  // psi_j = exp(i theta k) |j>; then <i| exp(-i theta k) a exp(i theta k) |j>
  // = <psi_i| a |psi_j> because k is self-adjoint.
  CMatrix psi;
  int work = cutoff + 32;
  for (;;) {
    psi = k2_propagator_columns(theta, work, cutoff + 1);
    if (psi.bottomRows(2).squaredNorm() < 1e-24) break;
    if (work >= 4096) throw CutoffTooSmall("padded working space for the K2 conjugation exceeds 4096 levels");
    work += work / 2;
  }
  const SparseCMatrix a = single_annihilator(work);
  const CMatrix block = psi.adjoint() * (a * psi);
  SparseCMatrix single = block.sparseView(1e-300, 1.0);
  return {OperatorLabel::Ladder, cutoff, embed(single, cutoff, mode)};
}

CVector rotated_vacuum(double theta, int cutoff) {
  check_cutoff(cutoff, 4);
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  // K2 is a sum of commuting single-mode terms, so the rotated vacuum is a
  // product state; each factor is evolved in a padded space to keep the
  // truncation edge away from the retained levels.
  CVector single;
  int work = cutoff + 32;
  for (;;) {
    single = k2_propagator_columns(-theta, work, 1).col(0);
    if (single.tail(2).squaredNorm() < 1e-24) break;
    if (work >= 4096) throw CutoffTooSmall("padded working space for the rotated vacuum exceeds 4096 levels");
    work += work / 2;
  }
  const CVector kept = single.head(cutoff + 1);
  const double dropped = std::max(0.0, 1.0 - kept.squaredNorm() * kept.squaredNorm());
  if (dropped > 1e-8) throw CutoffTooSmall("rotated vacuum drops " + std::to_string(dropped) + " of the norm at this cutoff");
  CVector out(static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1));
  for (int ma = 0; ma <= cutoff; ++ma) {
    for (int mt = 0; mt <= cutoff; ++mt) out(basis_index(cutoff, ma, mt)) = kept(ma) * kept(mt);
  }
  return out;
}

double interior_commutator_max(const SparseCMatrix& x, const SparseCMatrix& y, int cutoff) {
  const SparseCMatrix comm = SparseCMatrix(x * y) - SparseCMatrix(y * x);
  double best = 0.0;
  for (Eigen::Index j = 0; j < comm.outerSize(); ++j) {
    if (!is_interior(cutoff, j)) continue;
    for (SparseCMatrix::InnerIterator it(comm, j); it; ++it) {
      if (is_interior(cutoff, it.row())) best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

}  // namespace memdomain::fock
