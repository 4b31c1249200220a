#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "exo/coupling.hpp"

/**
 * Three-spin encoded qubits and the six-spin two-qubit register.
 *
 * A qubit on spins (p, q, r) has logical states |a> = (p (q r)_a)_1/2 with
 * a = 0, 1; the state (p (q r)_1)_3/2 is noncomputational. The register
 * holds qubit A on spins 1, 2, 3 and qubit B on spins 4, 5, 6. Two-qubit
 * matrices are written in the order ab = 00, 01, 10, 11.
 */
namespace exo {

using Gate4 = Eigen::Matrix4cd;
using Matrix2 = Eigen::Matrix2cd;
using Vector3 = Eigen::Vector3d;

struct EncodedQubit {
  std::array<int, 3> spins{1, 2, 3};

  /// (p (q r)_label)_root, both spins doubled.
  CouplingTree tree(int two_label, int two_root) const;
  Vector computational_state(int a, int two_sz, int n_spins) const;
  Vector noncomputational_state(int two_sz, int n_spins) const;
};

struct TwoQubitRegister {
  static constexpr int n_spins = 6;
  EncodedQubit a{{1, 2, 3}};
  EncodedQubit b{{4, 5, 6}};
};

struct EncodedBasis {
  int two_sz_a = 1;
  int two_sz_b = 1;
  /// |00>, |01>, |10>, |11>.
  std::array<Vector, 4> states;
  /// |nc>_A |0>_B and |0>_A |nc>_B at the top sz of the noncomputational
  /// qubit.
  std::vector<Vector> noncomputational;

  /// 64 x 4 matrix with the computational states as columns.
  Matrix columns() const;
};

EncodedBasis encoded_basis(
    const TwoQubitRegister& reg = {}, int two_sz_a = 1, int two_sz_b = 1);

/// Local-equivalence invariants of a two-qubit gate, evaluated in the magic
/// basis. Identity gives (1, 3) and CNOT gives (0, 1).
struct MakhlinInvariants {
  Complex g1;
  double g2 = 0.0;
};

/// Throws std::invalid_argument if gate is not unitary within tol.
MakhlinInvariants makhlin_invariants(const Gate4& gate, double tol = kCheckTol);

enum class GateClass { IdentityLike, ControlledNSigma, Other };

std::string to_string(GateClass c);

/// Outcome of testing gate == diag(1, 1, n.sigma) up to global phase.
struct NSigmaClassification {
  bool accepted = false;
  Vector3 nhat = Vector3::Zero();
  /// Target block after phase normalisation.
  Matrix2 m = Matrix2::Zero();
  double residual = 0.0;
  std::string reason;
};

struct GateReport {
  /// <ab| U |a'b'>, rescaled so that the (00, 00) entry is real positive.
  Gate4 gate = Gate4::Zero();
  /// Phase removed by the rescaling.
  Complex global_phase{1.0, 0.0};
  double leakage = 0.0;
  std::optional<MakhlinInvariants> makhlin;
  GateClass classification = GateClass::Other;
  std::optional<Vector3> nhat;
  std::string reason;
};

/// Projects a 64 x 64 register operator onto the encoded two-qubit space.
GateReport extract_gate(
    const Matrix& u, double tol = kCheckTol, const EncodedBasis& basis = encoded_basis());

NSigmaClassification classify_controlled_nsigma(
    const Gate4& gate, double tol = kCheckTol);

/// Classification of a report; rejects when leakage exceeds tol.
NSigmaClassification classify_controlled_nsigma(
    const GateReport& report, double tol = kCheckTol);

/// diag(1, 1, n.sigma).
Gate4 controlled_nsigma_gate(const Vector3& nhat);

/**
 * Block structure of a rotation-invariant operator on the five spins that
 * hold the control pair and the target qubit, in the effective basis
 * af = {0 1/2, 1 1/2 | 1 3/2}. Local spins 1..5 correspond to register
 * spins 2..6; the target qubit uses the tree (3 (4 5)_b)_1/2.
 */
struct ElevatedBlockReport {
  Matrix2 b00 = Matrix2::Zero();  // a = 0, f = 1/2
  Matrix2 b11 = Matrix2::Zero();  // a = 1, f = 1/2
  Matrix2 b33 = Matrix2::Zero();  // a = 1, f = 3/2
  double leakage = 0.0;
  double rotation_residual = 0.0;
  /// Phase of b00, which should be proportional to the identity.
  Complex phase{1.0, 0.0};
  /// b11 with the phase removed.
  Matrix2 m = Matrix2::Zero();
  double identity_residual = 0.0;
  double sector_mismatch = 0.0;
  bool ok = false;
  std::string failure;
};

ElevatedBlockReport elevated_structure(const Matrix& u5, double tol = kCheckTol);

/// Idealised elevated r-pulse on four spins (local labels): multiplies the
/// states with total spin 1 by `sign` and leaves total spin 0 and 2 alone.
/// On the c = 1/2 subspace of spins 2..4 it acts as diag(1, sign * 1) in d.
Matrix elevated_r_operator(int sign);

/// Three-spin operator in the basis ac = {0 1/2, 1 1/2 | 1 3/2} of the tree
/// ((1 2)_a 3)_c at sz = 1/2, together with its leakage out of that span.
struct ThreeSpinBlocks {
  Eigen::Matrix3cd matrix = Eigen::Matrix3cd::Zero();
  double leakage = 0.0;
};

ThreeSpinBlocks three_spin_blocks(const Matrix& u3);

/// The five-pulse three-spin sequence r(2,3) S(1,2) r(2,3) S(1,2) r(2,3).
PulseSequence base_r_sequence(int r);

}  // namespace exo
