#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "exo/encoding.hpp"

namespace exo {

struct SequenceStats {
  int n_swap = 0;       // t = 1
  int n_sqrt = 0;       // t = 1/2
  int n_invsqrt = 0;    // t = 3/2
  int n_identity = 0;   // t = 0
  int n_other = 0;
  int n_nontrivial = 0;  // t not in {0, 1}
  /// (n_swap + n_sqrt) mod 2.
  int parity = 0;
  int total = 0;

  friend bool operator==(const SequenceStats&, const SequenceStats&) = default;
};

SequenceStats sequence_stats(const PulseSequence& seq);

// Rewrite steps. Positions are chronological pulse indices.

/// Inserts U_ij(1) U_ij(1) before position pos (pos == size appends).
struct InsertPair {
  int i = 1;
  int j = 2;
  std::size_t pos = 0;
};
/// Removes two identical adjacent SWAPs starting at pos.
struct RemovePair {
  std::size_t pos = 0;
};
/// Moves the SWAP at pos one place later, relabelling the pulse it passes.
struct CommuteSwapRight {
  std::size_t pos = 0;
};
/// Moves the SWAP at pos one place earlier.
struct CommuteSwapLeft {
  std::size_t pos = 0;
};
/// Merges pulses pos and pos + 1 (same pair, one SWAP, the other a root-SWAP
/// or inverse root-SWAP) into a single pulse.
struct FuseSwapIntoPulse {
  std::size_t pos = 0;
};
/// Splits a root-SWAP or inverse root-SWAP at pos into a SWAP followed by
/// the complementary pulse. Inverse of FuseSwapIntoPulse on [SWAP, U].
struct SplitPulseIntoSwap {
  std::size_t pos = 0;
};

using RewriteStep = std::variant<
    InsertPair, RemovePair, CommuteSwapRight, CommuteSwapLeft,
    FuseSwapIntoPulse, SplitPulseIntoSwap>;

class RewriteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws RewriteError if the step's pattern does not match.
PulseSequence apply_step(const PulseSequence& seq, const RewriteStep& step);

/// Exact phase exp(-i pi phase) by which a step changes the unitary. Every
/// supported step is an exact operator identity, so this is 0 for all of
/// them; replays accumulate it anyway.
Duration step_phase(const RewriteStep& step);

/// Every step that applies to seq. InsertPair is offered for each
/// nearest-neighbour pair at each position.
std::vector<RewriteStep> applicable_steps(const PulseSequence& seq);

struct ScriptResult {
  PulseSequence sequence;
  Duration accumulated_phase;
  std::vector<PulseSequence> trace;  // sequence after each step
};

ScriptResult apply_script(const PulseSequence& seq, const std::vector<RewriteStep>& script);

/// Random script of `length` applicable steps.
std::vector<RewriteStep> random_script(
    const PulseSequence& seq, int length, std::mt19937_64& rng);

/// Script text: `insert_pair I J at P`, `remove_pair at P`,
/// `commute_right at P`, `commute_left at P`, `fuse at P`, `split at P`.
/// `#` starts a comment. Throws std::invalid_argument with the line number.
std::vector<RewriteStep> parse_script(std::string_view text);
std::string format_step(const RewriteStep& step);

/// Same-pair duration addition U(a) U(b) = U(a + b) for adjacent pulses at
/// pos and pos + 1. Not a rewrite step: refuses (RewriteError) when either
/// pulse is a SWAP or the result is 0 or 1.
PulseSequence merge_same_pair(const PulseSequence& seq, std::size_t pos);

struct NamedCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct InvariantReport {
  std::vector<NamedCheck> checks;
  bool ok = true;
};

/// Nontrivial count, parity and unitary (up to phase) must all agree.
InvariantReport check_rewrite_invariants(
    const PulseSequence& before, const PulseSequence& after, double tol = kCheckTol);

struct ComparisonReport {
  bool phase_equal = false;
  Complex phase{1.0, 0.0};
  double residual = 0.0;
  /// Filled for six-spin sequences when both gates are leakage free.
  std::optional<MakhlinInvariants> makhlin_a;
  std::optional<MakhlinInvariants> makhlin_b;
  bool locally_equivalent = false;
  double makhlin_distance = 0.0;
  int parity_a = 0;
  int parity_b = 0;
};

ComparisonReport compare_sequences(
    const PulseSequence& a, const PulseSequence& b, double tol = kCheckTol,
    double makhlin_tol = 1e-9);

}  // namespace exo
