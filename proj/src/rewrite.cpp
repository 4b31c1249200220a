#include "exo/rewrite.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace exo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using Pulses = std::vector<ExchangePulse>;

void require(bool cond, const std::string& what) {
  if (!cond) throw RewriteError(what);
}

bool is_root_swap(const Duration& t) {
  return t.is_sqrt_swap() || t.is_inverse_sqrt_swap();
}

// Conjugation by the transposition (a b) relabels the pulse's pair.
ExchangePulse conjugate(const ExchangePulse& p, int a, int b) {
  auto sigma = [a, b](int k) { return k == a ? b : (k == b ? a : k); };
  int i = sigma(p.i);
  int j = sigma(p.j);
  if (i > j) std::swap(i, j);
  return {i, j, p.t};
}

Pulses commute_right(const PulseSequence& seq, std::size_t pos) {
  require(pos + 1 < seq.size(), "commute_right: no pulse after position");
  const auto& swap = seq[pos];
  require(swap.t.is_swap(), "commute_right: pulse is not a SWAP");
  Pulses p = seq.pulses();
  p[pos] = conjugate(seq[pos + 1], swap.i, swap.j);
  p[pos + 1] = swap;
  return p;
}

Pulses commute_left(const PulseSequence& seq, std::size_t pos) {
  require(pos >= 1 && pos < seq.size(), "commute_left: no pulse before position");
  const auto& swap = seq[pos];
  require(swap.t.is_swap(), "commute_left: pulse is not a SWAP");
  Pulses p = seq.pulses();
  p[pos] = conjugate(seq[pos - 1], swap.i, swap.j);
  p[pos - 1] = swap;
  return p;
}

Pulses fuse(const PulseSequence& seq, std::size_t pos) {
  require(pos + 1 < seq.size(), "fuse: needs two pulses");
  const auto& a = seq[pos];
  const auto& b = seq[pos + 1];
  require(a.i == b.i && a.j == b.j, "fuse: pulses act on different pairs");
  const bool a_swap = a.t.is_swap() && is_root_swap(b.t);
  const bool b_swap = b.t.is_swap() && is_root_swap(a.t);
  require(a_swap || b_swap, "fuse: needs a SWAP next to a root-SWAP pulse");
  Pulses p = seq.pulses();
  p[pos] = {a.i, a.j, a.t + b.t};
  p.erase(p.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
  return p;
}

Pulses split(const PulseSequence& seq, std::size_t pos) {
  require(pos < seq.size(), "split: position out of range");
  const auto& a = seq[pos];
  require(is_root_swap(a.t), "split: pulse is not a root-SWAP pulse");
  Pulses p = seq.pulses();
  p[pos] = {a.i, a.j, Duration(1)};
  p.insert(p.begin() + static_cast<std::ptrdiff_t>(pos) + 1, {a.i, a.j, a.t + Duration(1)});
  return p;
}

std::size_t parse_position(std::istringstream& in, int line_no) {
  std::string at;
  long long pos = -1;
  if (!(in >> at) || at != "at" || !(in >> pos) || pos < 0) {
    throw std::invalid_argument(
        "line " + std::to_string(line_no) + ": expected 'at <position>'");
  }
  return static_cast<std::size_t>(pos);
}

}  // namespace

SequenceStats sequence_stats(const PulseSequence& seq) {
  SequenceStats s;
  for (const auto& p : seq.pulses()) {
    if (p.t.is_swap()) {
      ++s.n_swap;
    } else if (p.t.is_sqrt_swap()) {
      ++s.n_sqrt;
    } else if (p.t.is_inverse_sqrt_swap()) {
      ++s.n_invsqrt;
    } else if (p.t.is_identity()) {
      ++s.n_identity;
    } else {
      ++s.n_other;
    }
    if (!p.t.is_swap() && !p.t.is_identity()) ++s.n_nontrivial;
  }
  s.parity = (s.n_swap + s.n_sqrt) % 2;
  s.total = static_cast<int>(seq.size());
  return s;
}

PulseSequence apply_step(const PulseSequence& seq, const RewriteStep& step) {
  Pulses out = std::visit(
      overloaded{
          [&](const InsertPair& s) {
            require(s.pos <= seq.size(), "insert_pair: position out of range");
            validate_pair(seq.n_spins(), s.i, s.j);
            Pulses p = seq.pulses();
            const ExchangePulse swap{s.i, s.j, Duration(1)};
            p.insert(p.begin() + static_cast<std::ptrdiff_t>(s.pos), 2, swap);
            return p;
          },
          [&](const RemovePair& s) {
            require(s.pos + 1 < seq.size(), "remove_pair: needs two pulses");
            const auto& a = seq[s.pos];
            require(
                a.t.is_swap() && a == seq[s.pos + 1],
                "remove_pair: pulses are not a matching SWAP pair");
            Pulses p = seq.pulses();
            const auto first = p.begin() + static_cast<std::ptrdiff_t>(s.pos);
            p.erase(first, first + 2);
            return p;
          },
          [&](const CommuteSwapRight& s) { return commute_right(seq, s.pos); },
          [&](const CommuteSwapLeft& s) { return commute_left(seq, s.pos); },
          [&](const FuseSwapIntoPulse& s) { return fuse(seq, s.pos); },
          [&](const SplitPulseIntoSwap& s) { return split(seq, s.pos); },
      },
      step);
  return PulseSequence(seq.n_spins(), std::move(out));
}

Duration step_phase(const RewriteStep&) {
  // U_ij(1)^2 = 1, U_ij(1) U_kl(t) = U_s(k)s(l)(t) U_ij(1) and
  // U_ij(1) U_ij(t) = U_ij(t + 1) all hold exactly with singlet phase 1.
  return Duration(0);
}

std::vector<RewriteStep> applicable_steps(const PulseSequence& seq) {
  std::vector<RewriteStep> steps;
  const std::size_t n = seq.size();
  for (std::size_t pos = 0; pos <= n; ++pos) {
    for (int i = 1; i < seq.n_spins(); ++i) steps.push_back(InsertPair{i, i + 1, pos});
  }
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto& p = seq[pos];
    if (p.t.is_swap()) {
      if (pos + 1 < n) steps.push_back(CommuteSwapRight{pos});
      if (pos >= 1) steps.push_back(CommuteSwapLeft{pos});
      if (pos + 1 < n && seq[pos + 1] == p) steps.push_back(RemovePair{pos});
    }
    if (is_root_swap(p.t)) steps.push_back(SplitPulseIntoSwap{pos});
    if (pos + 1 < n) {
      const auto& q = seq[pos + 1];
      if (p.i == q.i && p.j == q.j &&
          ((p.t.is_swap() && is_root_swap(q.t)) ||
           (q.t.is_swap() && is_root_swap(p.t)))) {
        steps.push_back(FuseSwapIntoPulse{pos});
      }
    }
  }
  return steps;
}

ScriptResult apply_script(const PulseSequence& seq, const std::vector<RewriteStep>& script) {
  ScriptResult result{seq, Duration(0), {}};
  result.trace.reserve(script.size());
  for (const auto& step : script) {
    result.sequence = apply_step(result.sequence, step);
    result.accumulated_phase = result.accumulated_phase + step_phase(step);
    result.trace.push_back(result.sequence);
  }
  return result;
}

std::vector<RewriteStep> random_script(
    const PulseSequence& seq, int length, std::mt19937_64& rng) {
  std::vector<RewriteStep> script;
  PulseSequence current = seq;
  for (int k = 0; k < length; ++k) {
    // pick a step kind first so insertions do not swamp the choice
    std::array<std::vector<RewriteStep>, std::variant_size_v<RewriteStep>> by_kind;
    for (auto& s : applicable_steps(current)) by_kind[s.index()].push_back(std::move(s));
    std::vector<std::size_t> kinds;
    for (std::size_t c = 0; c < by_kind.size(); ++c) {
      if (!by_kind[c].empty()) kinds.push_back(c);
    }
    if (kinds.empty()) break;
    const auto& pool =
        by_kind[kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)]];
    const auto& step = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    current = apply_step(current, step);
    script.push_back(step);
  }
  return script;
}

std::vector<RewriteStep> parse_script(std::string_view text) {
  std::vector<RewriteStep> steps;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string op;
    if (!(in >> op)) continue;
    if (op == "insert_pair") {
      int i = 0, j = 0;
      if (!(in >> i >> j)) {
        throw std::invalid_argument(
            "line " + std::to_string(line_no) + ": insert_pair needs two spins");
      }
      steps.push_back(InsertPair{i, j, parse_position(in, line_no)});
    } else if (op == "remove_pair") {
      steps.push_back(RemovePair{parse_position(in, line_no)});
    } else if (op == "commute_right") {
      steps.push_back(CommuteSwapRight{parse_position(in, line_no)});
    } else if (op == "commute_left") {
      steps.push_back(CommuteSwapLeft{parse_position(in, line_no)});
    } else if (op == "fuse") {
      steps.push_back(FuseSwapIntoPulse{parse_position(in, line_no)});
    } else if (op == "split") {
      steps.push_back(SplitPulseIntoSwap{parse_position(in, line_no)});
    } else {
      throw std::invalid_argument(
          "line " + std::to_string(line_no) + ": unknown step '" + op + "'");
    }
    std::string extra;
    if (in >> extra) {
      throw std::invalid_argument(
          "line " + std::to_string(line_no) + ": trailing text '" + extra + "'");
    }
  }
  return steps;
}

std::string format_step(const RewriteStep& step) {
  return std::visit(
      overloaded{
          [](const InsertPair& s) {
            return "insert_pair " + std::to_string(s.i) + " " + std::to_string(s.j) +
                   " at " + std::to_string(s.pos);
          },
          [](const RemovePair& s) { return "remove_pair at " + std::to_string(s.pos); },
          [](const CommuteSwapRight& s) { return "commute_right at " + std::to_string(s.pos); },
          [](const CommuteSwapLeft& s) { return "commute_left at " + std::to_string(s.pos); },
          [](const FuseSwapIntoPulse& s) { return "fuse at " + std::to_string(s.pos); },
          [](const SplitPulseIntoSwap& s) { return "split at " + std::to_string(s.pos); },
      },
      step);
}

PulseSequence merge_same_pair(const PulseSequence& seq, std::size_t pos) {
  require(pos + 1 < seq.size(), "merge: needs two pulses");
  const auto& a = seq[pos];
  const auto& b = seq[pos + 1];
  require(a.i == b.i && a.j == b.j, "merge: pulses act on different pairs");
  require(!a.t.is_swap() && !b.t.is_swap(), "merge: refuses to absorb a SWAP");
  const Duration sum = a.t + b.t;
  require(!sum.is_identity() && !sum.is_swap(), "merge: result would be trivial");
  Pulses p = seq.pulses();
  p[pos] = {a.i, a.j, sum};
  p.erase(p.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
  return PulseSequence(seq.n_spins(), std::move(p));
}

InvariantReport check_rewrite_invariants(
    const PulseSequence& before, const PulseSequence& after, double tol) {
  InvariantReport report;
  const auto sb = sequence_stats(before);
  const auto sa = sequence_stats(after);
  report.checks.push_back(
      {"nontrivial_count", sb.n_nontrivial == sa.n_nontrivial,
       static_cast<double>(std::abs(sb.n_nontrivial - sa.n_nontrivial)), 0.0});
  report.checks.push_back(
      {"parity", sb.parity == sa.parity,
       static_cast<double>(std::abs(sb.parity - sa.parity)), 0.0});
  if (before.n_spins() != after.n_spins()) {
    report.checks.push_back({"unitary_up_to_phase", false, 0.0, tol});
  } else {
    const auto match =
        equal_up_to_global_phase(sequence_unitary(after), sequence_unitary(before), tol);
    report.checks.push_back({"unitary_up_to_phase", match.equal, match.residual, tol});
  }
  for (const auto& c : report.checks) report.ok = report.ok && c.pass;
  return report;
}

ComparisonReport compare_sequences(
    const PulseSequence& a, const PulseSequence& b, double tol, double makhlin_tol) {
  if (a.n_spins() != b.n_spins()) {
    throw std::invalid_argument("compare: sequences act on different registers");
  }
  ComparisonReport report;
  const Matrix ua = sequence_unitary(a);
  const Matrix ub = sequence_unitary(b);
  const auto match = equal_up_to_global_phase(ua, ub, tol);
  report.phase_equal = match.equal;
  report.phase = match.phase;
  report.residual = match.residual;
  report.parity_a = sequence_stats(a).parity;
  report.parity_b = sequence_stats(b).parity;
  if (a.n_spins() == TwoQubitRegister::n_spins) {
    const auto ga = extract_gate(ua, tol);
    const auto gb = extract_gate(ub, tol);
    report.makhlin_a = ga.makhlin;
    report.makhlin_b = gb.makhlin;
    if (ga.makhlin && gb.makhlin) {
      report.makhlin_distance = std::max(
          std::abs(ga.makhlin->g1 - gb.makhlin->g1),
          std::abs(ga.makhlin->g2 - gb.makhlin->g2));
      report.locally_equivalent = report.makhlin_distance <= makhlin_tol;
    }
  }
  if (report.phase_equal) report.locally_equivalent = true;
  return report;
}

}  // namespace exo
