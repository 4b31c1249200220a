#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exo/duration.hpp"

/**
 * Dense product-basis simulation of exchange pulses on n spin-1/2
 * particles.
 *
 * Basis convention: spin k (1-based) is bit (n - k) of the basis index, so
 * spin 1 is the most significant bit. Bit value 0 is spin up, 1 is spin
 * down. For n = 2 the basis order is |uu>, |ud>, |du>, |dd>.
 *
 * Sequences are chronological: the first pulse listed acts first, so the
 * unitary of [p1, p2, p3] is U(p3) U(p2) U(p1).
 */
namespace exo {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Tolerance for acceptance-level checks.
inline constexpr double kCheckTol = 1e-10;
/// Tolerance for algebraic identities that should hold to rounding.
inline constexpr double kIdentityTol = 1e-12;
/// Largest register the dense simulator accepts.
inline constexpr int kMaxSpins = 10;

struct ExchangePulse {
  int i = 1;
  int j = 2;
  Duration t;

  friend bool operator==(const ExchangePulse&, const ExchangePulse&) = default;
};

class PulseSequence {
 public:
  explicit PulseSequence(int n_spins = 0, std::vector<ExchangePulse> pulses = {});

  int n_spins() const { return n_spins_; }
  const std::vector<ExchangePulse>& pulses() const { return pulses_; }
  std::size_t size() const { return pulses_.size(); }
  bool empty() const { return pulses_.empty(); }
  const ExchangePulse& operator[](std::size_t k) const { return pulses_[k]; }

  void push_back(const ExchangePulse& p);
  void append(const PulseSequence& other);

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

 private:
  int n_spins_ = 0;
  std::vector<ExchangePulse> pulses_;
};

/// Throws std::out_of_range unless 1 <= i < j <= n_spins.
void validate_pair(int n_spins, int i, int j);

int dimension(int n_spins);

/// Operator that exchanges spins i and j.
Matrix permutation_operator(int n_spins, int i, int j);

/// (singlet projector, triplet projector) of the pair (i, j).
std::pair<Matrix, Matrix> exchange_projectors(int n_spins, int i, int j);

/// Pi_s + exp(-i pi t) Pi_t.
Matrix pulse_unitary(int n_spins, int i, int j, const Duration& t);
Matrix pulse_unitary(int n_spins, const ExchangePulse& pulse);

/// In-place left multiplication m <- U(pulse) m. Works on vectors too.
void apply_pulse(Eigen::Ref<Matrix> m, int n_spins, const ExchangePulse& pulse);

/// Same as apply_pulse with the triplet phase given directly, for
/// continuous durations during root refinement.
void apply_exchange(Eigen::Ref<Matrix> m, int n_spins, int i, int j, Complex triplet_phase);

Matrix sequence_unitary(const PulseSequence& seq);

/// Applies the sequence to a state vector.
Vector apply_sequence(const PulseSequence& seq, const Vector& state);

/// Reversed order with every duration replaced by (2 - t) mod 2.
PulseSequence invert_sequence(const PulseSequence& seq);

/// Moves a sequence to a register of n_spins spins, sending local spin k to
/// spin_map[k - 1].
PulseSequence relabel(
    const PulseSequence& seq, int n_spins, std::span<const int> spin_map);

/// Min over |phi| = 1 of the Frobenius norm ||a - phi b||.
struct PhaseMatch {
  bool equal = false;
  Complex phase{1.0, 0.0};
  double residual = 0.0;
};

/// Throws std::invalid_argument on a dimension mismatch.
PhaseMatch equal_up_to_global_phase(
    const Matrix& a, const Matrix& b, double tol = kCheckTol);

/// Total S_z, S_+ and S^2 on the whole register.
Matrix total_sz(int n_spins);
Matrix total_raising(int n_spins);
Matrix total_spin_squared(int n_spins);

/// (S_i + S_j + ...)^2 over a subset of spins.
Matrix subset_spin_squared(int n_spins, std::span<const int> spins);

/// True iff u commutes with total S_z, S_+ and S^2 within tol.
bool rotational_invariance_check(
    const Matrix& u, int n_spins, double tol = kCheckTol);

/// Largest Frobenius norm of [u, S_z], [u, S_+], [u, S^2].
double rotational_invariance_residual(const Matrix& u, int n_spins);

}  // namespace exo
