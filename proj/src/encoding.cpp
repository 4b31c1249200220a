#include "exo/encoding.hpp"

#include <algorithm>
#include <stdexcept>

namespace exo {

namespace {

const Gate4& magic_basis() {
  static const Gate4 q = [] {
    const Complex i(0.0, 1.0);
    Gate4 m;
    m << 1, 0, 0, i,
         0, i, 1, 0,
         0, i, -1, 0,
         1, 0, 0, -i;
    return Gate4(m / std::sqrt(2.0));
  }();
  return q;
}

double unitarity_residual(const Eigen::MatrixXcd& m) {
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).norm();
}

Complex phase_of(Complex z) {
  return std::abs(z) > 0.0 ? z / std::abs(z) : Complex(1.0, 0.0);
}

// Largest norm of the part of u * block.col(k) outside the span of `span`.
// Columns of `span` must be orthonormal.
double leakage_outside(const Matrix& u, const Matrix& block, const Matrix& span) {
  const Matrix image = u * block;
  const Matrix inside = span * (span.adjoint() * image);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < image.cols(); ++k) {
    worst = std::max(worst, (image.col(k) - inside.col(k)).norm());
  }
  return worst;
}

}  // namespace

CouplingTree EncodedQubit::tree(int two_label, int two_root) const {
  return CouplingTree::couple(
      CouplingTree::leaf(spins[0]),
      CouplingTree::couple(
          CouplingTree::leaf(spins[1]), CouplingTree::leaf(spins[2]), two_label),
      two_root);
}

Vector EncodedQubit::computational_state(int a, int two_sz, int n_spins) const {
  if (a != 0 && a != 1) throw std::invalid_argument("logical label must be 0 or 1");
  return embedded_state(tree(2 * a, 1), two_sz, n_spins);
}

Vector EncodedQubit::noncomputational_state(int two_sz, int n_spins) const {
  return embedded_state(tree(2, 3), two_sz, n_spins);
}

Matrix EncodedBasis::columns() const {
  Matrix m(states[0].size(), 4);
  for (int k = 0; k < 4; ++k) m.col(k) = states[k];
  return m;
}

EncodedBasis encoded_basis(const TwoQubitRegister& reg, int two_sz_a, int two_sz_b) {
  constexpr int n = TwoQubitRegister::n_spins;
  EncodedBasis basis;
  basis.two_sz_a = two_sz_a;
  basis.two_sz_b = two_sz_b;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      basis.states[2 * a + b] = disjoint_product(
          reg.a.computational_state(a, two_sz_a, n),
          reg.b.computational_state(b, two_sz_b, n));
    }
  }
  basis.noncomputational.push_back(disjoint_product(
      reg.a.noncomputational_state(3, n), reg.b.computational_state(0, 1, n)));
  basis.noncomputational.push_back(disjoint_product(
      reg.a.computational_state(0, 1, n), reg.b.noncomputational_state(3, n)));
  return basis;
}

MakhlinInvariants makhlin_invariants(const Gate4& gate, double tol) {
  if (unitarity_residual(gate) > tol) {
    throw std::invalid_argument("makhlin_invariants: gate is not unitary");
  }
  const Gate4& q = magic_basis();
  const Gate4 ub = q.adjoint() * gate * q;
  const Gate4 m = ub.transpose() * ub;
  const Complex det = gate.determinant();
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), ((tr * tr - tr2) / (4.0 * det)).real()};
}

std::string to_string(GateClass c) {
  switch (c) {
    case GateClass::IdentityLike:
      return "identity-like";
    case GateClass::ControlledNSigma:
      return "controlled-nsigma";
    case GateClass::Other:
      break;
  }
  return "other";
}

Gate4 controlled_nsigma_gate(const Vector3& n) {
  const Complex i(0.0, 1.0);
  Gate4 g = Gate4::Identity();
  g(2, 2) = n.z();
  g(2, 3) = n.x() - i * n.y();
  g(3, 2) = n.x() + i * n.y();
  g(3, 3) = -n.z();
  return g;
}

NSigmaClassification classify_controlled_nsigma(const Gate4& raw, double tol) {
  NSigmaClassification out;
  const Gate4 gate = raw / phase_of(raw(0, 0));
  const Matrix2 m = gate.block<2, 2>(2, 2);
  out.m = m;

  const double control_residual = std::max(
      {(gate.block<2, 2>(0, 0) - Matrix2::Identity()).norm(),
       gate.block<2, 2>(0, 2).norm(), gate.block<2, 2>(2, 0).norm()});
  const double hermitian = (m - m.adjoint()).norm();
  const double traceless = std::abs(m.trace());
  const double involutive = (m * m - Matrix2::Identity()).norm();
  out.residual = std::max({control_residual, hermitian, traceless, involutive});

  if (control_residual > tol) {
    out.reason = "gate is not of the form diag(1, 1, M)";
  } else if ((m - Matrix2::Identity()).norm() <= tol ||
             (m + Matrix2::Identity()).norm() <= tol) {
    out.reason = "M = +-1: gate is not entangling";
  } else if (hermitian > tol) {
    out.reason = "M is not Hermitian";
  } else if (traceless > tol) {
    out.reason = "M is not traceless";
  } else if (involutive > tol) {
    out.reason = "M does not square to the identity";
  } else {
    out.accepted = true;
    out.nhat = Vector3(m(1, 0).real(), m(1, 0).imag(), m(0, 0).real());
  }
  return out;
}

NSigmaClassification classify_controlled_nsigma(const GateReport& report, double tol) {
  if (report.leakage > tol) {
    NSigmaClassification out;
    out.residual = report.leakage;
    out.reason = "gate leaks out of the encoded space";
    return out;
  }
  return classify_controlled_nsigma(report.gate, tol);
}

GateReport extract_gate(const Matrix& u, double tol, const EncodedBasis& basis) {
  const Matrix v = basis.columns();
  if (u.rows() != v.rows() || u.cols() != v.rows()) {
    throw std::invalid_argument("extract_gate expects a 64 x 64 operator");
  }
  GateReport report;
  const Gate4 raw = v.adjoint() * u * v;
  report.leakage = leakage_outside(u, v, v);
  report.global_phase = phase_of(raw(0, 0));
  report.gate = raw / report.global_phase;

  if (report.leakage > tol) {
    report.reason = "gate leaks out of the encoded space";
    return report;
  }
  if (unitarity_residual(report.gate) <= tol) {
    report.makhlin = makhlin_invariants(report.gate, tol);
  }
  if ((report.gate - Gate4::Identity()).norm() <= tol) {
    report.classification = GateClass::IdentityLike;
    return report;
  }
  const auto cls = classify_controlled_nsigma(report.gate, tol);
  if (cls.accepted) {
    report.classification = GateClass::ControlledNSigma;
    report.nhat = cls.nhat;
  } else {
    report.reason = cls.reason;
  }
  return report;
}

ElevatedBlockReport elevated_structure(const Matrix& u5, double tol) {
  constexpr int n = 5;
  ElevatedBlockReport out;
  if (u5.rows() != dimension(n) || u5.cols() != dimension(n)) {
    throw std::invalid_argument("elevated_structure expects a 32 x 32 operator");
  }
  out.rotation_residual = rotational_invariance_residual(u5, n);

  // ((1 2)_a (3 (4 5)_b)_1/2)_f at sz = 1/2
  auto state = [](int a, int two_f, int b) {
    const auto target = CouplingTree::couple(
        CouplingTree::leaf(3),
        CouplingTree::couple(CouplingTree::leaf(4), CouplingTree::leaf(5), 2 * b),
        1);
    const auto control =
        CouplingTree::couple(CouplingTree::leaf(1), CouplingTree::leaf(2), 2 * a);
    return coupled_state(CouplingTree::couple(control, target, two_f), 1).vector;
  };
  const std::array<std::pair<int, int>, 3> sectors{{{0, 1}, {1, 1}, {1, 3}}};
  std::array<Matrix, 3> blocks;
  for (int s = 0; s < 3; ++s) {
    blocks[s].resize(dimension(n), 2);
    for (int b = 0; b < 2; ++b) {
      blocks[s].col(b) = state(sectors[s].first, sectors[s].second, b);
    }
  }
  out.b00 = blocks[0].adjoint() * u5 * blocks[0];
  out.b11 = blocks[1].adjoint() * u5 * blocks[1];
  out.b33 = blocks[2].adjoint() * u5 * blocks[2];
  for (const auto& blk : blocks) {
    out.leakage = std::max(out.leakage, leakage_outside(u5, blk, blk));
  }

  out.phase = phase_of(out.b00.trace());
  out.identity_residual = (out.b00 - out.phase * Matrix2::Identity()).norm();
  out.m = out.b11 / out.phase;
  out.sector_mismatch = (out.b33 / out.phase - out.m).norm();

  if (out.rotation_residual > tol) {
    out.failure = "operator is not rotation invariant";
  } else if (out.leakage > tol) {
    out.failure = "operator mixes the af blocks";
  } else if (out.identity_residual > tol) {
    out.failure = "a = 0 block is not proportional to the identity";
  } else if (out.sector_mismatch > tol) {
    out.failure = "f = 1/2 and f = 3/2 blocks differ";
  } else {
    out.ok = true;
  }
  return out;
}

Matrix elevated_r_operator(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  constexpr int n = 4;
  const std::array<int, 4> all{1, 2, 3, 4};
  const Matrix p1 = sector_projector(n, all, 2).projector;
  return Matrix::Identity(dimension(n), dimension(n)) +
         static_cast<double>(sign - 1) * p1;
}

ThreeSpinBlocks three_spin_blocks(const Matrix& u3) {
  if (u3.rows() != dimension(3) || u3.cols() != dimension(3)) {
    throw std::invalid_argument("three_spin_blocks expects an 8 x 8 operator");
  }
  const std::array<const char*, 3> trees{
      "((1 2)_0 3)_1/2", "((1 2)_1 3)_1/2", "((1 2)_1 3)_3/2"};
  Matrix v(dimension(3), 3);
  for (int k = 0; k < 3; ++k) v.col(k) = coupled_state(parse_tree(trees[k]), 1).vector;
  ThreeSpinBlocks out;
  out.matrix = v.adjoint() * u3 * v;
  out.leakage = leakage_outside(u3, v, v);
  return out;
}

PulseSequence base_r_sequence(int r) {
  if (r != 0 && r != 1) throw std::invalid_argument("r must be 0 or 1");
  const Duration rt(r);
  const Duration swap(1);
  return PulseSequence(
      3, {{2, 3, rt}, {1, 2, swap}, {2, 3, rt}, {1, 2, swap}, {2, 3, rt}});
}

}  // namespace exo
