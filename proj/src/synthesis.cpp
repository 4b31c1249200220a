#include "exo/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace exo {

namespace {

constexpr int kLocalSpins = 4;
constexpr double kMakhlinTol = 1e-9;
// refined roots must sit this close to a low-denominator rational
constexpr double kSnapTol = 1e-9;

struct ConstraintStates {
  Vector left;   // ((1 2)_1 (3 4)_1)_1
  Vector right;  // (1 ((2 3)_1 4)_3/2)_1
};

const ConstraintStates& constraint_states() {
  static const ConstraintStates states{
      coupled_state(parse_tree("((1 2)_1 (3 4)_1)_1"), 2).vector,
      coupled_state(parse_tree("(1 ((2 3)_1 4)_3/2)_1"), 2).vector};
  return states;
}

Complex phase_of_time(double t) {
  const double angle = std::numbers::pi * t;
  return {std::cos(angle), -std::sin(angle)};
}

Complex unit_phase(Complex z) {
  return std::abs(z) > 0.0 ? z / std::abs(z) : Complex(1.0, 0.0);
}

using Pair = std::pair<int, int>;
using Word = std::vector<Pair>;

Complex word_element(const Word& word, const std::vector<double>& ts) {
  const auto& cs = constraint_states();
  Vector v = cs.right;
  for (std::size_t k = 0; k < word.size(); ++k) {
    apply_exchange(v, kLocalSpins, word[k].first, word[k].second, phase_of_time(ts[k]));
  }
  return cs.left.dot(v);
}

double wrap2(double t) {
  t = std::fmod(t, 2.0);
  return t < 0.0 ? t + 2.0 : t;
}

// Golden-section minimisation of |E| along one coordinate.
double line_minimise(const Word& word, std::vector<double> ts, std::size_t c, double h) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double x) {
    ts[c] = x;
    return std::abs(word_element(word, ts));
  };
  double lo = ts[c] - h, hi = ts[c] + h;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> refine(const Word& word, std::vector<double> ts, double h) {
  double prev = std::abs(word_element(word, ts));
  for (int sweep = 0; sweep < 40; ++sweep) {
    for (std::size_t c = 0; c < ts.size(); ++c) ts[c] = line_minimise(word, ts, c, h);
    const double cur = std::abs(word_element(word, ts));
    // stalled away from zero: a flat direction or a non-zero minimum
    if (cur < 1e-15 || (cur > 1e-8 && cur > 0.5 * prev)) break;
    prev = cur;
    h = std::max(0.5 * h, 1e-12);
  }
  for (auto& t : ts) t = wrap2(t);
  return ts;
}

// Grid points whose |E| does not exceed any neighbour on the periodic grid.
std::vector<std::vector<double>> grid_minima(const Word& word, int grid) {
  const int points = 2 * grid;
  const std::size_t k = word.size();
  std::size_t total = 1;
  for (std::size_t c = 0; c < k; ++c) total *= points;
  std::vector<double> values(total);
  auto decode = [&](std::size_t flat) {
    std::vector<int> idx(k);
    for (std::size_t c = k; c-- > 0;) {
      idx[c] = static_cast<int>(flat % points);
      flat /= points;
    }
    return idx;
  };
  auto encode = [&](const std::vector<int>& idx) {
    std::size_t flat = 0;
    for (std::size_t c = 0; c < k; ++c) flat = flat * points + ((idx[c] % points + points) % points);
    return flat;
  };
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = decode(flat);
    std::vector<double> ts(k);
    for (std::size_t c = 0; c < k; ++c) ts[c] = static_cast<double>(idx[c]) / grid;
    values[flat] = std::abs(word_element(word, ts));
  }
  std::vector<std::vector<double>> minima;
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = decode(flat);
    bool is_min = true;
    std::size_t n_offsets = 1;
    for (std::size_t c = 0; c < k; ++c) n_offsets *= 3;
    for (std::size_t o = 0; o < n_offsets && is_min; ++o) {
      auto nb = idx;
      std::size_t rem = o;
      bool centre = true;
      for (std::size_t c = 0; c < k; ++c) {
        const int d = static_cast<int>(rem % 3) - 1;
        rem /= 3;
        nb[c] += d;
        centre = centre && d == 0;
      }
      if (!centre && values[encode(nb)] < values[flat]) is_min = false;
    }
    if (is_min) {
      std::vector<double> ts(k);
      for (std::size_t c = 0; c < k; ++c) ts[c] = static_cast<double>(idx[c]) / grid;
      minima.push_back(std::move(ts));
    }
  }
  return minima;
}

// Refined and snapped zeros of a one- or two-pulse word.
std::vector<std::vector<Duration>> refined_roots(
    const Word& word, int grid, double tol, std::int64_t snap_den) {
  std::vector<std::vector<Duration>> roots;
  for (const auto& start : grid_minima(word, grid)) {
    const auto ts = refine(word, start, 1.0 / grid);
    if (std::abs(word_element(word, ts)) > 1e-8) continue;
    std::vector<Duration> snapped;
    bool ok = true;
    for (double t : ts) {
      const Rational r = nearest_rational(t, snap_den);
      const double rd = static_cast<double>(r.numerator()) / r.denominator();
      if (std::abs(rd - t) > kSnapTol) {
        ok = false;
        break;
      }
      snapped.push_back(Duration::wrap(r, snap_den));
    }
    if (!ok) continue;
    std::vector<double> exact_ts;
    for (const auto& d : snapped) exact_ts.push_back(d.to_double());
    if (std::abs(word_element(word, exact_ts)) > tol) continue;
    if (std::find(roots.begin(), roots.end(), snapped) == roots.end()) {
      roots.push_back(std::move(snapped));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Coefficients divided by beta, when every ratio is a Gaussian integer.
std::optional<std::array<GaussianInt, 4>> integer_ratios(const ConstraintCoefficients& c) {
  if (std::abs(c.beta) == 0.0) return std::nullopt;
  std::array<GaussianInt, 4> out;
  const std::array<Complex, 4> coefs{c.alpha, c.beta, c.gamma, c.delta};
  for (int k = 0; k < 4; ++k) {
    const Complex r = coefs[k] / c.beta;
    const GaussianInt g(std::llround(r.real()), std::llround(r.imag()));
    if (std::abs(r - Complex(static_cast<double>(g.real()), static_cast<double>(g.imag()))) >
        kIdentityTol) {
      return std::nullopt;
    }
    out[k] = g;
  }
  return out;
}

bool exactly_zero(const ConstraintCoefficients& c, const Duration& t1, const Duration& t2) {
  const auto ratios = integer_ratios(c);
  const auto x = t1.exact_phase();
  const auto y = t2.exact_phase();
  if (!ratios || !x || !y) return false;
  const GaussianInt sum = (*ratios)[0] + (*ratios)[1] * *x + (*ratios)[2] * *y +
                          (*ratios)[3] * *x * *y;
  return sum == GaussianInt(0, 0);
}

Vector local_state(const char* tree, int two_sz) {
  return coupled_state(parse_tree(tree), two_sz).vector;
}

Matrix columns(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  Eigen::Index k = 0;
  for (const auto& v : vs) m.col(k++) = v;
  return m;
}

double leakage(const Matrix& u, const Matrix& span) {
  const Matrix image = u * span;
  return (image - span * (span.adjoint() * image)).colwise().norm().maxCoeff();
}

void add_check(std::vector<NamedCheck>& checks, std::string name, double residual, double tol) {
  checks.push_back({std::move(name), residual <= tol, residual, tol});
}

bool all_pass(const std::vector<NamedCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::vector<Word> words_of_length(std::size_t len) {
  static const std::array<Pair, 3> pairs{{{1, 2}, {2, 3}, {3, 4}}};
  std::vector<Word> out{{}};
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<Word> next;
    for (const auto& w : out) {
      for (const auto& p : pairs) {
        if (!w.empty() && w.back() == p) continue;
        auto e = w;
        e.push_back(p);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

PulseSequence word_sequence(const Word& word, const std::vector<Duration>& ts) {
  PulseSequence seq(kLocalSpins);
  for (std::size_t k = 0; k < word.size(); ++k) {
    seq.push_back({word[k].first, word[k].second, ts[k]});
  }
  return seq;
}

// Depth-first grid scan applying one pulse per level.
void scan_word(
    const Word& word, int grid, double tol, std::size_t depth, const Vector& state,
    std::vector<Duration>& ts, std::vector<VCandidate>& out) {
  const auto& cs = constraint_states();
  if (depth == word.size()) {
    const double residual = std::abs(cs.left.dot(state));
    if (residual <= tol) out.push_back({word_sequence(word, ts), residual});
    return;
  }
  for (int k = 0; k < 2 * grid; ++k) {
    ts[depth] = Duration(k, grid, grid);
    Vector next = state;
    apply_pulse(next, kLocalSpins, {word[depth].first, word[depth].second, ts[depth]});
    scan_word(word, grid, tol, depth + 1, next, ts, out);
  }
}

}  // namespace

Complex ConstraintCoefficients::evaluate(double t1, double t2) const {
  const Complex x = phase_of_time(t1);
  const Complex y = phase_of_time(t2);
  return alpha + beta * x + gamma * y + delta * x * y;
}

Complex ConstraintCoefficients::evaluate(const Duration& t1, const Duration& t2) const {
  const Complex x = t1.phase();
  const Complex y = t2.phase();
  return alpha + beta * x + gamma * y + delta * x * y;
}

PulseSequence VSolution::sequence() const {
  return PulseSequence(kLocalSpins, {{1, 2, t1}, {2, 3, t2}});
}

Complex constraint_element(const PulseSequence& v) {
  if (v.n_spins() != kLocalSpins) {
    throw std::invalid_argument("constraint_element expects a four-spin sequence");
  }
  const auto& cs = constraint_states();
  return cs.left.dot(apply_sequence(v, cs.right));
}

Complex constraint_element(const Duration& t1, const Duration& t2) {
  return constraint_element(VSolution{t1, t2}.sequence());
}

Complex constraint_element(double t1, double t2) {
  return word_element({{1, 2}, {2, 3}}, {t1, t2});
}

ConstraintCoefficients extract_coefficients() {
  const Duration zero(0), one(1);
  const Complex e00 = constraint_element(zero, zero);
  const Complex e01 = constraint_element(zero, one);
  const Complex e10 = constraint_element(one, zero);
  const Complex e11 = constraint_element(one, one);
  ConstraintCoefficients c;
  c.alpha = (e00 + e01 + e10 + e11) / 4.0;
  c.beta = (e00 + e01 - e10 - e11) / 4.0;
  c.gamma = (e00 - e01 + e10 - e11) / 4.0;
  c.delta = (e00 - e01 - e10 + e11) / 4.0;
  c.F = e00.real();
  return c;
}

std::vector<VSolution> solve_two_pulse(const SolveOptions& opts) {
  if (opts.grid_denominator < 1) throw std::invalid_argument("grid denominator must be positive");
  const auto coefs = extract_coefficients();
  std::vector<VSolution> out;
  for (const auto& root :
       refined_roots({{1, 2}, {2, 3}}, opts.grid_denominator, opts.tol, opts.snap_denominator)) {
    VSolution s{root[0], root[1]};
    s.residual = std::abs(constraint_element(s.t1, s.t2));
    s.exact = exactly_zero(coefs, s.t1, s.t2);
    out.push_back(s);
  }
  if (out.empty()) throw std::runtime_error("solve_two_pulse: no solution found");
  std::sort(out.begin(), out.end(), [](const VSolution& a, const VSolution& b) {
    return a.t1 < b.t1 || (a.t1 == b.t1 && a.t2 < b.t2);
  });
  return out;
}

MinimalityReport verify_two_pulse_minimality(double tol) {
  MinimalityReport report;
  for (const auto& [i, j] : std::array<Pair, 3>{{{1, 2}, {2, 3}, {3, 4}}}) {
    const Complex e0 = constraint_element(PulseSequence(kLocalSpins, {{i, j, Duration(0)}}));
    const Complex e1 = constraint_element(PulseSequence(kLocalSpins, {{i, j, Duration(1)}}));
    PairMinimality p{i, j, 0.5 * (e0 + e1), 0.5 * (e0 - e1)};
    p.gap = std::abs(std::abs(p.a) - std::abs(p.b));
    p.has_solution = p.gap <= tol;
    report.pairs.push_back(p);
  }
  report.single_pulse_impossible = std::none_of(
      report.pairs.begin(), report.pairs.end(), [](const auto& p) { return p.has_solution; });
  return report;
}

PulseSequence build_R(const PulseSequence& v) {
  if (v.n_spins() != kLocalSpins) throw std::invalid_argument("V must act on four spins");
  PulseSequence r = v;
  r.push_back({1, 2, Duration(1)});
  r.push_back({3, 4, Duration(1)});
  r.append(invert_sequence(v));
  return r;
}

PulseSequence build_R(const VSolution& v) { return build_R(v.sequence()); }

const NamedCheck* RReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

RReport verify_R(const PulseSequence& r, double tol) {
  if (r.n_spins() != kLocalSpins) throw std::invalid_argument("R must act on four spins");
  RReport report;
  const Matrix u = sequence_unitary(r);
  const int d = dimension(kLocalSpins);
  const Matrix id = Matrix::Identity(d, d);

  const auto sq = equal_up_to_global_phase(u * u, id, tol);
  add_check(report.checks, "r_squares_to_identity", sq.residual, tol);

  const std::array<int, 3> target{2, 3, 4};
  const Matrix pc = sector_projector(kLocalSpins, target, 3).projector;
  add_check(report.checks, "r_preserves_c", (u * pc - pc * u).norm(), tol);

  const Matrix d0 = columns(
      {local_state("(1 ((2 3)_0 4)_1/2)_0", 0), local_state("(1 ((2 3)_1 4)_1/2)_0", 0)});
  const Matrix2 b0 = d0.adjoint() * u * d0;
  report.phase = unit_phase(b0.trace());
  add_check(
      report.checks, "r_d0_identity",
      std::max((b0 - report.phase * Matrix2::Identity()).norm(), leakage(u, d0)), tol);

  const Vector c32 = local_state("(1 ((2 3)_1 4)_3/2)_1", 2);
  const Vector image = u * c32;
  const Complex lambda = c32.dot(image);
  report.c32_eigenvalue = lambda / report.phase;
  add_check(
      report.checks, "r_c32_eigenvalue",
      std::max(std::abs(report.c32_eigenvalue + 1.0), (image - lambda * c32).norm()), tol);

  const Matrix d1 = columns(
      {local_state("(1 ((2 3)_0 4)_1/2)_1", 2), local_state("(1 ((2 3)_1 4)_1/2)_1", 2)});
  report.m = Matrix2(d1.adjoint() * u * d1) / report.phase;
  const Matrix2& m = report.m;
  add_check(report.checks, "r_block_leakage", leakage(u, d1), tol);
  add_check(
      report.checks, "r_block_unitary", (m.adjoint() * m - Matrix2::Identity()).norm(), tol);
  add_check(report.checks, "r_block_hermitian", (m - m.adjoint()).norm(), tol);
  add_check(report.checks, "r_block_traceless", std::abs(m.trace()), tol);
  add_check(report.checks, "r_block_involutive", (m * m - Matrix2::Identity()).norm(), tol);
  report.nhat = Vector3(m(1, 0).real(), m(1, 0).imag(), m(0, 0).real());
  report.ok = all_pass(report.checks);
  return report;
}

PulseSequence build_full_sequence(const PulseSequence& r) {
  if (r.n_spins() != kLocalSpins) throw std::invalid_argument("R must act on four spins");
  constexpr std::array<int, 4> spin_map{3, 4, 5, 6};
  const PulseSequence placed = relabel(r, TwoQubitRegister::n_spins, spin_map);
  PulseSequence full(TwoQubitRegister::n_spins);
  const PulseSequence top_swap(TwoQubitRegister::n_spins, {{2, 3, Duration(1)}});
  full.append(placed);
  full.append(top_swap);
  full.append(placed);
  full.append(top_swap);
  full.append(placed);
  return full;
}

PulseSequence build_full_sequence(const VSolution& v) {
  return build_full_sequence(build_R(v));
}

PulseSequence five_spin_part(const PulseSequence& full) {
  PulseSequence out(5);
  for (const auto& p : full.pulses()) {
    if (p.i == 1) throw std::invalid_argument("sequence acts on spin 1");
    out.push_back({p.i - 1, p.j - 1, p.t});
  }
  return out;
}

std::vector<NamedCheck> verify_gate_sequence(const PulseSequence& seq, double tol) {
  if (seq.n_spins() != TwoQubitRegister::n_spins) {
    throw std::invalid_argument("gate verification expects a six-spin sequence");
  }
  std::vector<NamedCheck> checks;
  const Matrix u = sequence_unitary(seq);
  add_check(checks, "rotation_invariant", rotational_invariance_residual(u, seq.n_spins()), tol);
  const auto gate = extract_gate(u, tol);
  add_check(checks, "leakage", gate.leakage, tol);
  double makhlin_residual = std::numeric_limits<double>::infinity();
  if (gate.makhlin) {
    makhlin_residual =
        std::max(std::abs(gate.makhlin->g1), std::abs(gate.makhlin->g2 - 1.0));
  }
  add_check(checks, "makhlin_cnot", makhlin_residual, kMakhlinTol);
  return checks;
}

DerivationReport derive(double tol) {
  DerivationReport rep;
  auto& checks = rep.checks;

  rep.coefficients = extract_coefficients();
  const auto& c = rep.coefficients;
  const double half_f = 0.5 * c.F;
  add_check(
      checks, "coefficient_pattern",
      std::max(
          {std::abs(c.alpha + half_f), std::abs(c.beta - half_f), std::abs(c.gamma - half_f),
           std::abs(c.delta - half_f)}),
      tol);

  rep.solutions = solve_two_pulse({.tol = tol});
  double worst = 0.0;
  for (const auto& s : rep.solutions) worst = std::max(worst, s.residual);
  add_check(checks, "solution_residuals", worst, tol);
  const bool two = rep.solutions.size() == 2;
  checks.push_back({"solution_count_two", two, two ? 0.0 : 1.0, 0.0});

  rep.minimality = verify_two_pulse_minimality();
  // the gaps themselves are in rep.minimality
  const bool single = rep.minimality.single_pulse_impossible;
  checks.push_back({"single_pulse_impossible", single, single ? 0.0 : 1.0, 0.0});

  rep.chosen = rep.solutions.front();
  rep.r_sequence = build_R(rep.chosen);
  rep.r_report = verify_R(rep.r_sequence, tol);
  checks.insert(checks.end(), rep.r_report.checks.begin(), rep.r_report.checks.end());

  rep.full_sequence = build_full_sequence(rep.r_sequence);
  const Matrix u = sequence_unitary(rep.full_sequence);
  rep.gate = extract_gate(u, tol);
  add_check(checks, "gate_leakage", rep.gate.leakage, tol);
  const auto cls = classify_controlled_nsigma(rep.gate, tol);
  checks.push_back({"gate_controlled_nsigma", cls.accepted, cls.residual, tol});
  for (const auto& chk : verify_gate_sequence(rep.full_sequence, tol)) {
    if (chk.name == "makhlin_cnot") checks.push_back({"gate_makhlin_cnot", chk.pass, chk.residual, chk.tolerance});
  }

  rep.elevated = elevated_structure(sequence_unitary(five_spin_part(rep.full_sequence)), tol);
  checks.push_back(
      {"elevated_same_m", rep.elevated.ok,
       std::max({rep.elevated.leakage, rep.elevated.identity_residual, rep.elevated.sector_mismatch}),
       tol});
  add_check(checks, "elevated_matches_gate", (rep.elevated.m - cls.m).norm(), tol);

  rep.stats = sequence_stats(rep.full_sequence);
  const bool nearest = std::all_of(
      rep.full_sequence.pulses().begin(), rep.full_sequence.pulses().end(),
      [](const ExchangePulse& p) { return p.j == p.i + 1; });
  checks.push_back({"nearest_neighbor", nearest, nearest ? 0.0 : 1.0, 0.0});

  double worst_makhlin = 0.0;
  for (const auto& s : rep.solutions) {
    SolutionGate sg{s, extract_gate(sequence_unitary(build_full_sequence(s)), tol)};
    if (sg.gate.makhlin) {
      worst_makhlin = std::max(
          {worst_makhlin, std::abs(sg.gate.makhlin->g1), std::abs(sg.gate.makhlin->g2 - 1.0)});
    } else {
      worst_makhlin = std::numeric_limits<double>::infinity();
    }
    rep.all_gates.push_back(std::move(sg));
  }
  add_check(checks, "all_solutions_makhlin_cnot", worst_makhlin, kMakhlinTol);

  rep.ok = all_pass(checks);
  return rep;
}

std::vector<VCandidate> search_v(int max_pulses, int grid, double tol) {
  if (max_pulses < 1 || max_pulses > kMaxSearchPulses) {
    throw std::invalid_argument(
        "max_pulses must lie in [1, " + std::to_string(kMaxSearchPulses) + "]");
  }
  if (grid < 1 || grid > kDefaultMaxDenominator) {
    throw std::invalid_argument("grid denominator out of range");
  }
  std::vector<VCandidate> out;
  for (int len = 1; len <= max_pulses; ++len) {
    for (const auto& word : words_of_length(static_cast<std::size_t>(len))) {
      std::vector<VCandidate> found;
      std::vector<Duration> ts(word.size());
      scan_word(word, grid, tol, 0, constraint_states().right, ts, found);
      if (len <= 2) {
        for (const auto& root : refined_roots(word, grid, tol, kDefaultMaxDenominator)) {
          const auto seq = word_sequence(word, root);
          const bool seen = std::any_of(
              found.begin(), found.end(), [&](const VCandidate& c) { return c.v == seq; });
          if (!seen) found.push_back({seq, std::abs(constraint_element(seq))});
        }
      }
      std::sort(found.begin(), found.end(), [](const VCandidate& a, const VCandidate& b) {
        return std::lexicographical_compare(
            a.v.pulses().begin(), a.v.pulses().end(), b.v.pulses().begin(), b.v.pulses().end(),
            [](const ExchangePulse& x, const ExchangePulse& y) { return x.t < y.t; });
      });
      out.insert(out.end(), found.begin(), found.end());
    }
  }
  return out;
}

}  // namespace exo
