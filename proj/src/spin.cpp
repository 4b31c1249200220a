#include "exo/spin.hpp"

#include <algorithm>
#include <stdexcept>

namespace exo {

namespace {

int bit_of(int n_spins, int spin) { return n_spins - spin; }

int swap_spins(int index, int n_spins, int i, int j) {
  const int bi = (index >> bit_of(n_spins, i)) & 1;
  const int bj = (index >> bit_of(n_spins, j)) & 1;
  if (bi == bj) return index;
  return index ^ (1 << bit_of(n_spins, i)) ^ (1 << bit_of(n_spins, j));
}

void check_register(int n_spins) {
  if (n_spins < 1 || n_spins > kMaxSpins) {
    throw std::out_of_range(
        "register size " + std::to_string(n_spins) + " outside [1, " +
        std::to_string(kMaxSpins) + "]");
  }
}

Matrix single_spin_op(int n_spins, int spin, int which) {
  // which: 0 -> S_z, 1 -> S_+
  const int d = dimension(n_spins);
  Matrix op = Matrix::Zero(d, d);
  const int b = bit_of(n_spins, spin);
  for (int x = 0; x < d; ++x) {
    const bool down = (x >> b) & 1;
    if (which == 0) {
      op(x, x) = down ? -0.5 : 0.5;
    } else if (down) {
      op(x ^ (1 << b), x) = 1.0;
    }
  }
  return op;
}

double commutator_norm(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).norm();
}

}  // namespace

PulseSequence::PulseSequence(int n_spins, std::vector<ExchangePulse> pulses)
    : n_spins_(n_spins) {
  if (n_spins != 0) check_register(n_spins);
  pulses_.reserve(pulses.size());
  for (const auto& p : pulses) push_back(p);
}

void PulseSequence::push_back(const ExchangePulse& p) {
  validate_pair(n_spins_, p.i, p.j);
  pulses_.push_back(p);
}

void PulseSequence::append(const PulseSequence& other) {
  if (other.n_spins_ != n_spins_) {
    throw std::invalid_argument("cannot append sequences on different registers");
  }
  pulses_.insert(pulses_.end(), other.pulses_.begin(), other.pulses_.end());
}

void validate_pair(int n_spins, int i, int j) {
  if (i == j) throw std::out_of_range("i = j");
  if (i < 1 || j > n_spins || i > j) {
    throw std::out_of_range(
        "bad spin indices (" + std::to_string(i) + ", " + std::to_string(j) +
        ") on " + std::to_string(n_spins) + " spins");
  }
}

int dimension(int n_spins) {
  check_register(n_spins);
  return 1 << n_spins;
}

Matrix permutation_operator(int n_spins, int i, int j) {
  validate_pair(n_spins, i, j);
  const int d = dimension(n_spins);
  Matrix p = Matrix::Zero(d, d);
  for (int x = 0; x < d; ++x) p(swap_spins(x, n_spins, i, j), x) = 1.0;
  return p;
}

std::pair<Matrix, Matrix> exchange_projectors(int n_spins, int i, int j) {
  // S_i . S_j = P_ij / 2 - 1/4, so 1/4 - S_i.S_j = (1 - P)/2 and
  // 3/4 + S_i.S_j = (1 + P)/2.
  const Matrix p = permutation_operator(n_spins, i, j);
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  return {0.5 * (id - p), 0.5 * (id + p)};
}

Matrix pulse_unitary(int n_spins, int i, int j, const Duration& t) {
  auto [singlet, triplet] = exchange_projectors(n_spins, i, j);
  return singlet + t.phase() * triplet;
}

Matrix pulse_unitary(int n_spins, const ExchangePulse& pulse) {
  return pulse_unitary(n_spins, pulse.i, pulse.j, pulse.t);
}

void apply_pulse(Eigen::Ref<Matrix> m, int n_spins, const ExchangePulse& pulse) {
  apply_exchange(m, n_spins, pulse.i, pulse.j, pulse.t.phase());
}

void apply_exchange(Eigen::Ref<Matrix> m, int n_spins, int i, int j, Complex phi) {
  validate_pair(n_spins, i, j);
  const int d = dimension(n_spins);
  if (m.rows() != d) throw std::invalid_argument("dimension mismatch");
  // U = (1 + phi)/2 + (phi - 1)/2 P
  const Complex c0 = 0.5 * (1.0 + phi);
  const Complex c1 = 0.5 * (phi - 1.0);
  for (int x = 0; x < d; ++x) {
    const int y = swap_spins(x, n_spins, i, j);
    if (y < x) continue;
    if (y == x) {
      // P acts trivially: U = c0 + c1 = phi
      m.row(x) *= phi;
      continue;
    }
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      const Complex a = m(x, col);
      const Complex b = m(y, col);
      m(x, col) = c0 * a + c1 * b;
      m(y, col) = c0 * b + c1 * a;
    }
  }
}

Matrix sequence_unitary(const PulseSequence& seq) {
  const int d = dimension(seq.n_spins());
  Matrix u = Matrix::Identity(d, d);
  for (const auto& p : seq.pulses()) apply_pulse(u, seq.n_spins(), p);
  return u;
}

Vector apply_sequence(const PulseSequence& seq, const Vector& state) {
  Vector v = state;
  for (const auto& p : seq.pulses()) apply_pulse(v, seq.n_spins(), p);
  return v;
}

PulseSequence invert_sequence(const PulseSequence& seq) {
  PulseSequence inv(seq.n_spins());
  for (auto it = seq.pulses().rbegin(); it != seq.pulses().rend(); ++it) {
    inv.push_back({it->i, it->j, it->t.inverse()});
  }
  return inv;
}

PulseSequence relabel(
    const PulseSequence& seq, int n_spins, std::span<const int> spin_map) {
  if (static_cast<int>(spin_map.size()) < seq.n_spins()) {
    throw std::invalid_argument("spin map shorter than the source register");
  }
  PulseSequence out(n_spins);
  for (const auto& p : seq.pulses()) {
    int a = spin_map[p.i - 1];
    int b = spin_map[p.j - 1];
    if (a > b) std::swap(a, b);
    out.push_back({a, b, p.t});
  }
  return out;
}

PhaseMatch equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("dimension mismatch");
  }
  // argmin_phi ||a - phi b|| is phi = <b, a> / |<b, a>|
  const Complex overlap = (b.adjoint() * a).trace();
  PhaseMatch match;
  if (std::abs(overlap) > 0.0) match.phase = overlap / std::abs(overlap);
  match.residual = (a - match.phase * b).norm();
  match.equal = match.residual <= tol;
  return match;
}

Matrix total_sz(int n_spins) {
  const int d = dimension(n_spins);
  Matrix op = Matrix::Zero(d, d);
  for (int k = 1; k <= n_spins; ++k) op += single_spin_op(n_spins, k, 0);
  return op;
}

Matrix total_raising(int n_spins) {
  const int d = dimension(n_spins);
  Matrix op = Matrix::Zero(d, d);
  for (int k = 1; k <= n_spins; ++k) op += single_spin_op(n_spins, k, 1);
  return op;
}

Matrix subset_spin_squared(int n_spins, std::span<const int> spins) {
  const int d = dimension(n_spins);
  Matrix op = Matrix::Identity(d, d) * (0.75 * static_cast<double>(spins.size()));
  for (std::size_t a = 0; a < spins.size(); ++a) {
    for (std::size_t b = a + 1; b < spins.size(); ++b) {
      const int i = std::min(spins[a], spins[b]);
      const int j = std::max(spins[a], spins[b]);
      // 2 S_i.S_j = P_ij - 1/2
      op += permutation_operator(n_spins, i, j);
      op -= 0.5 * Matrix::Identity(d, d);
    }
  }
  return op;
}

Matrix total_spin_squared(int n_spins) {
  std::vector<int> all(n_spins);
  for (int k = 0; k < n_spins; ++k) all[k] = k + 1;
  return subset_spin_squared(n_spins, all);
}

double rotational_invariance_residual(const Matrix& u, int n_spins) {
  const int d = dimension(n_spins);
  if (u.rows() != d || u.cols() != d) {
    throw std::invalid_argument("dimension mismatch");
  }
  return std::max(
      {commutator_norm(u, total_sz(n_spins)),
       commutator_norm(u, total_raising(n_spins)),
       commutator_norm(u, total_spin_squared(n_spins))});
}

bool rotational_invariance_check(const Matrix& u, int n_spins, double tol) {
  return rotational_invariance_residual(u, n_spins) <= tol;
}

}  // namespace exo
