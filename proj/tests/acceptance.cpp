// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "exo/synthesis.hpp"
#include "oracle.hpp"

namespace {

using namespace exo;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

const VSolution kSol1{Duration(1, 2), Duration(3, 2)};
const VSolution kSol2{Duration(3, 2), Duration(1, 2)};

Outcome pulse_spectrum() {
  double worst = 0.0;
  for (const auto& t : {Duration(0), Duration(1, 2), Duration(1), Duration(3, 2)}) {
    for (const auto& [n, i, j] : {std::tuple{2, 1, 2}, {4, 2, 4}, {6, 3, 4}}) {
      const Matrix u = pulse_unitary(n, i, j, t);
      const auto [ps, pt] = exchange_projectors(n, i, j);
      worst = std::max({worst, (u * ps - ps).norm(), (u * pt - t.phase() * pt).norm()});
    }
    // eigenvalues of the two-spin pulse: {1} on the singlet, phase x3 on the triplet
    Eigen::ComplexEigenSolver<Matrix> es(pulse_unitary(2, 1, 2, t));
    std::vector<Complex> want{1.0, t.phase(), t.phase(), t.phase()};
    for (Eigen::Index k = 0; k < 4; ++k) {
      const Complex ev = es.eigenvalues()(k);
      auto it = std::min_element(want.begin(), want.end(), [&](Complex a, Complex b) {
        return std::abs(a - ev) < std::abs(b - ev);
      });
      worst = std::max(worst, std::abs(*it - ev));
      want.erase(it);
    }
  }
  return {worst < 1e-12, "max residual " + sci(worst) + " (tol 1e-12)"};
}

Outcome central_swaps() {
  const char* states[] = {
      "((1 2)_0 (3 4)_0)_0", "((1 2)_1 (3 4)_1)_0",                        // d = 0
      "((1 2)_0 (3 4)_1)_1", "((1 2)_1 (3 4)_0)_1", "((1 2)_1 (3 4)_1)_1"};  // d = 1
  Matrix v(16, 5);
  for (int k = 0; k < 5; ++k) v.col(k) = coupled_state(parse_tree(states[k]), 0).vector;
  const Matrix u = sequence_unitary(PulseSequence(4, {{1, 2, Duration(1)}, {3, 4, Duration(1)}}));
  Eigen::VectorXcd d(5);
  d << 1, 1, -1, -1, 1;
  const Matrix block = v.adjoint() * u * v;
  const double res = (block - Matrix(d.asDiagonal())).norm();
  const double leak = (u * v - v * block).norm();
  const double worst = std::max(res, leak);
  return {worst < 1e-10, "||block - diag(1,1,-1,-1,1)|| " + sci(res) + ", leakage " + sci(leak)};
}

Outcome coefficients() {
  const auto c = extract_coefficients();
  const double pattern = std::max(
      {std::abs(c.alpha + c.F / 2), std::abs(c.beta - c.F / 2), std::abs(c.gamma - c.F / 2),
       std::abs(c.delta - c.F / 2)});
  const double oracle_f = oracle::F();
  const double agree = std::abs(c.F - oracle_f);
  const bool pass = pattern < 1e-12 && std::abs(c.F) > 0.1 && agree < 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf, "F = %.15f, pattern residual %s, |F - oracle| %s", c.F,
                sci(pattern).c_str(), sci(agree).c_str());
  return {pass, buf};
}

Outcome solutions() {
  const auto sols = solve_two_pulse();
  bool pass = sols.size() == 2 && sols[0] == kSol1 && sols[1] == kSol2;
  double worst = 0.0;
  for (const auto& s : sols) worst = std::max(worst, s.residual);
  pass = pass && worst < 1e-10;

  SolveOptions fine;
  fine.grid_denominator = 48;
  const auto again = solve_two_pulse(fine);
  pass = pass && again.size() == 2 && again[0] == kSol1 && again[1] == kSol2;

  int zeros = 0;
  for (std::int64_t a = 0; a < 96; ++a) {
    for (std::int64_t b = 0; b < 96; ++b) {
      zeros += std::abs(constraint_element(Duration(a, 48), Duration(b, 48))) < 1e-10;
    }
  }
  pass = pass && zeros == 2;
  std::string list;
  for (const auto& s : sols) list += " (" + s.t1.str() + ", " + s.t2.str() + ")";
  return {pass, "solutions" + list + ", max |E| " + sci(worst) + ", zeros on 1/48 grid " +
                    std::to_string(zeros)};
}

Outcome minimality() {
  const auto rep = verify_two_pulse_minimality();
  bool pass = rep.single_pulse_impossible && rep.pairs.size() == 3;
  std::string detail = "gaps";
  for (const auto& p : rep.pairs) {
    pass = pass && p.gap > 1e-6;
    detail += " " + std::to_string(p.i) + std::to_string(p.j) + ":" + sci(p.gap);
  }
  return {pass, detail + " (need > 1e-6)"};
}

Outcome r_properties() {
  bool pass = true;
  std::string failed;
  double worst = 0.0;
  for (const auto& s : {kSol1, kSol2}) {
    const auto rep = verify_R(build_R(s), 1e-10);
    for (const auto& c : rep.checks) {
      worst = std::max(worst, c.residual);
      if (!c.pass) failed += " " + c.name;
    }
    pass = pass && rep.ok;
  }
  return {pass, pass ? "all checks, max residual " + sci(worst) : "failed:" + failed};
}

Outcome full_gate() {
  const auto rep = derive();
  const auto cls = classify_controlled_nsigma(rep.gate, 1e-10);
  const bool leak_ok = rep.gate.leakage < 1e-10;
  bool makhlin_ok = false;
  double g1 = 1.0, g2 = 0.0;
  if (rep.gate.makhlin) {
    g1 = std::abs(rep.gate.makhlin->g1);
    g2 = std::abs(rep.gate.makhlin->g2 - 1.0);
    makhlin_ok = g1 < 1e-9 && g2 < 1e-9;
  }
  const bool elevated_ok = rep.elevated.ok && rep.elevated.sector_mismatch <= 1e-10 &&
                           (rep.elevated.m - cls.m).norm() <= 1e-10;
  const bool pass = rep.full_sequence.size() == 20 && leak_ok && cls.accepted && makhlin_ok &&
                    elevated_ok;
  return {pass, "leakage " + sci(rep.gate.leakage) + ", |G1| " + sci(g1) + ", |G2-1| " + sci(g2) +
                    ", f-sector mismatch " + sci(rep.elevated.sector_mismatch)};
}

Outcome counts() {
  const auto full = build_full_sequence(kSol1);
  const auto st = sequence_stats(full);
  const bool nn = std::all_of(full.pulses().begin(), full.pulses().end(),
                              [](const ExchangePulse& p) { return p.j == p.i + 1; });
  const bool pass = st.n_swap == 8 && st.n_sqrt == 6 && st.n_invsqrt == 6 &&
                    st.n_nontrivial == 12 && st.parity == 0 && nn;
  char buf[160];
  std::snprintf(buf, sizeof buf, "(%d, %d, %d), %d nontrivial, parity %s, nearest-neighbour %s",
                st.n_swap, st.n_sqrt, st.n_invsqrt, st.n_nontrivial,
                st.parity == 0 ? "even" : "odd", nn ? "yes" : "no");
  return {pass, buf};
}

Outcome rewrite_invariance() {
  const PulseSequence base = build_full_sequence(kSol1);
  const Matrix u = sequence_unitary(base);
  std::mt19937_64 rng(0xacce97);
  std::uniform_int_distribution<int> length(1, 16);
  constexpr int kScripts = 1000;
  int ok = 0;
  double worst = 0.0;
  for (int k = 0; k < kScripts; ++k) {
    const auto res = apply_script(base, random_script(base, length(rng), rng));
    const auto rep = check_rewrite_invariants(base, res.sequence, 1e-10);
    for (const auto& c : rep.checks) {
      if (c.name == "unitary_up_to_phase") worst = std::max(worst, c.residual);
    }
    ok += rep.ok;
  }
  int round_trips = 0, exact = 0;
  for (std::size_t pos = 0; pos < base.size(); ++pos) {
    if (!(base[pos].t.is_sqrt_swap() || base[pos].t.is_inverse_sqrt_swap())) continue;
    ++round_trips;
    const auto split = apply_step(base, SplitPulseIntoSwap{pos});
    exact += apply_step(split, FuseSwapIntoPulse{pos}) == base &&
             (sequence_unitary(split) - u).norm() < 1e-12;
  }
  const bool pass = ok == kScripts && round_trips == 12 && exact == round_trips;
  return {pass, std::to_string(ok) + "/" + std::to_string(kScripts) +
                    " scripts, max unitary residual " + sci(worst) + ", fuse/split exact " +
                    std::to_string(exact) + "/" + std::to_string(round_trips)};
}

Outcome base_case() {
  bool pass = true;
  std::string detail;
  for (int r : {0, 1}) {
    const auto blocks = three_spin_blocks(sequence_unitary(base_r_sequence(r)));
    const double m = r == 0 ? 1.0 : -1.0;
    Eigen::Matrix3cd expect = Eigen::Matrix3cd::Identity();
    expect(1, 1) = expect(2, 2) = m;
    const auto match = equal_up_to_global_phase(blocks.matrix, expect, 1e-10);
    pass = pass && match.equal && blocks.leakage < 1e-10;
    detail += (r == 0 ? "" : ", ") + std::string("r=") + std::to_string(r) + " residual " +
              sci(match.residual);
  }
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"pulse spectrum on singlet/triplet sectors", pulse_spectrum},
      {"central SWAP pair is diagonal in the coupled basis", central_swaps},
      {"constraint coefficients -alpha = beta = gamma = delta = F/2", coefficients},
      {"exactly two two-pulse solutions", solutions},
      {"no single-pulse solution", minimality},
      {"R properties for both solutions", r_properties},
      {"full gate: leakage, controlled-(n.sigma), CNOT invariants, elevated blocks", full_gate},
      {"pulse counts and parity", counts},
      {"rewrite invariance over random scripts", rewrite_invariance},
      {"three-spin base sequence", base_case},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
