#pragma once

#include <string>
#include <vector>

#include "exo/rewrite.hpp"

/**
 * Two-qubit gate construction from a four-spin constraint.
 *
 * A four-spin operation V (spins labelled 1..4 locally) is admissible when
 *
 *   E(V) = < ((12)_1 (34)_1)_1 | V | (1 (234)_3/2)_1 > = 0.
 *
 * Conjugating the central SWAPs U_12(1) U_34(1) by an admissible V gives an
 * operation R on (1 ((23)_b 4)_c)_d that preserves c, is the identity for
 * d = 0 and applies a traceless involution M = n.sigma to b for d = 1 and
 * c = 1/2. Placing R on register spins 3..6 in the pattern
 * R, U_23(1), R, U_23(1), R yields a leakage-free controlled-(n.sigma)
 * gate on the six-spin register.
 *
 * For V = U_23(t2) U_12(t1) the matrix element expands as
 * E = alpha + beta x + gamma y + delta x y with x = exp(-i pi t1) and
 * y = exp(-i pi t2).
 */
namespace exo {

struct ConstraintCoefficients {
  Complex alpha;
  Complex beta;
  Complex gamma;
  Complex delta;
  double F = 0.0;

  Complex evaluate(double t1, double t2) const;
  Complex evaluate(const Duration& t1, const Duration& t2) const;
};

/// V = U_23(t2) U_12(t1) in local spin labels.
struct VSolution {
  Duration t1;
  Duration t2;
  double residual = 0.0;
  /// True when E was re-verified as exactly zero in Gaussian-integer
  /// arithmetic from the normalised coefficients.
  bool exact = false;

  PulseSequence sequence() const;

  friend bool operator==(const VSolution& a, const VSolution& b) {
    return a.t1 == b.t1 && a.t2 == b.t2;
  }
};

/// The constraint matrix element of an arbitrary four-spin sequence.
Complex constraint_element(const PulseSequence& v);
Complex constraint_element(const Duration& t1, const Duration& t2);
Complex constraint_element(double t1, double t2);

/// Inverts the evaluations at t1 t2 = 00, 01, 10, 11.
ConstraintCoefficients extract_coefficients();

struct SolveOptions {
  int grid_denominator = 24;
  double tol = kCheckTol;
  std::int64_t snap_denominator = kDefaultMaxDenominator;
};

/// Zeros of E(t1, t2) on [0, 2)^2: grid scan, coordinate-wise refinement of
/// |E|^2, rational snapping and re-verification. Sorted by (t1, t2).
/// Throws std::runtime_error if nothing is found.
std::vector<VSolution> solve_two_pulse(const SolveOptions& opts = {});

struct PairMinimality {
  int i = 0;
  int j = 0;
  /// E(t) = a + b exp(-i pi t) for V = U_ij(t).
  Complex a;
  Complex b;
  /// ||a| - |b||; a zero exists only if this vanishes.
  double gap = 0.0;
  bool has_solution = false;
};

struct MinimalityReport {
  std::vector<PairMinimality> pairs;
  bool single_pulse_impossible = false;
};

MinimalityReport verify_two_pulse_minimality(double tol = 1e-6);

/// V, U_12(1), U_34(1), V^-1 on four local spins.
PulseSequence build_R(const PulseSequence& v);
PulseSequence build_R(const VSolution& v);

struct RReport {
  std::vector<NamedCheck> checks;
  bool ok = true;
  /// Phase of R on the d = 0 sector.
  Complex phase{1.0, 0.0};
  /// (c = 1/2, d = 1) block in the b basis of ((2 3)_b 4)_1/2, phase removed.
  Matrix2 m = Matrix2::Zero();
  Vector3 nhat = Vector3::Zero();
  /// Eigenvalue of the c = 3/2 state relative to phase.
  Complex c32_eigenvalue;

  const NamedCheck* find(const std::string& name) const;
};

RReport verify_R(const PulseSequence& r, double tol = kCheckTol);

/// R on register spins 3..6 in the pattern R, U_23(1), R, U_23(1), R.
PulseSequence build_full_sequence(const PulseSequence& r);
PulseSequence build_full_sequence(const VSolution& v);

/// Drops spin 1 of a six-spin sequence that never touches it.
PulseSequence five_spin_part(const PulseSequence& full);

struct SolutionGate {
  VSolution solution;
  GateReport gate;
};

struct DerivationReport {
  ConstraintCoefficients coefficients;
  std::vector<VSolution> solutions;
  MinimalityReport minimality;
  VSolution chosen;
  PulseSequence r_sequence;
  RReport r_report;
  PulseSequence full_sequence;
  GateReport gate;
  ElevatedBlockReport elevated;
  SequenceStats stats;
  /// Gates for every solution, not just the chosen one.
  std::vector<SolutionGate> all_gates;
  std::vector<NamedCheck> checks;
  bool ok = true;
};

DerivationReport derive(double tol = kCheckTol);

/// Checks that any six-spin sequence is a leakage-free gate locally
/// equivalent to CNOT.
std::vector<NamedCheck> verify_gate_sequence(const PulseSequence& seq, double tol = kCheckTol);

struct VCandidate {
  PulseSequence v;
  double residual = 0.0;
};

inline constexpr int kMaxSearchPulses = 3;

/// All pulse words over pairs {12, 23, 34} with no pair repeated
/// back-to-back, up to max_pulses long, at the grid points t = k / grid with
/// |E| <= tol. Words of one or two pulses are additionally refined from the
/// grid's local minima. Sorted by word, then durations.
std::vector<VCandidate> search_v(int max_pulses, int grid, double tol = kCheckTol);

}  // namespace exo
