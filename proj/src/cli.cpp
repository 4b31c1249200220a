#include "exo/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "exo/report.hpp"
#include "exo/sequence_file.hpp"

namespace exo {

namespace {

PulseSequence load_sequence(const std::string& path) {
  return parse_sequence_file(read_text_file(path));
}

bool all_pass(const std::vector<NamedCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

void print_checks(std::ostream& out, const std::vector<NamedCheck>& checks) {
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " residual=" << format_number(c.residual)
        << " tol=" << format_number(c.tolerance) << '\n';
  }
}

void print_stats(std::ostream& out, const SequenceStats& s) {
  out << "swap " << s.n_swap << '\n'
      << "sqrt " << s.n_sqrt << '\n'
      << "invsqrt " << s.n_invsqrt << '\n'
      << "identity " << s.n_identity << '\n'
      << "other " << s.n_other << '\n'
      << "nontrivial " << s.n_nontrivial << '\n'
      << "parity " << s.parity << '\n'
      << "total " << s.total << '\n';
}

std::string pulse_list(const PulseSequence& seq) {
  std::string text;
  for (const auto& p : seq.pulses()) {
    if (!text.empty()) text += ", ";
    text += "U" + std::to_string(p.i) + std::to_string(p.j) + "(" + p.t.str() + ")";
  }
  return text;
}

int cmd_derive(
    double tol, const std::string& out_path, const std::string& report_path, std::ostream& out) {
  const auto rep = derive(tol);
  std::string comment = "controlled-(n.sigma) gate on qubits (1 2 3), (4 5 6)\nV = U12(" +
                        rep.chosen.t1.str() + ") then U23(" + rep.chosen.t2.str() + ")";
  const std::string seq_text = emit_sequence_file(rep.full_sequence, comment);
  if (!out_path.empty()) {
    write_text_file(out_path, seq_text);
  } else {
    out << seq_text;
  }
  if (!report_path.empty()) write_text_file(report_path, derivation_report(rep));

  out << "# F " << format_number(rep.coefficients.F) << '\n';
  for (const auto& s : rep.solutions) {
    out << "# solution t1=" << s.t1.str() << " t2=" << s.t2.str()
        << " residual=" << format_number(s.residual) << (s.exact ? " exact" : "") << '\n';
  }
  std::ostringstream checks;
  print_checks(checks, rep.checks);
  std::istringstream lines(checks.str());
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  return rep.ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(double tol, const std::string& path, std::ostream& out, std::ostream& err) {
  const auto seq = load_sequence(path);
  std::vector<NamedCheck> checks;
  if (seq.n_spins() == TwoQubitRegister::n_spins) {
    checks = verify_gate_sequence(seq, tol);
  } else if (seq.n_spins() == 4) {
    checks = verify_R(seq, tol).checks;
  } else {
    err << "verify: expected a 6-spin gate or a 4-spin R sequence, got " << seq.n_spins()
        << " spins\n";
    return kExitUsage;
  }
  print_checks(out, checks);
  const bool ok = all_pass(checks);
  out << (ok ? "OK" : "FAILED") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(double tol, const std::string& path, bool matrix, std::ostream& out) {
  const auto seq = load_sequence(path);
  const Matrix u = sequence_unitary(seq);
  if (matrix || seq.n_spins() != TwoQubitRegister::n_spins) {
    out << unitary_report(u, seq.n_spins());
    return kExitOk;
  }
  out << gate_report(extract_gate(u, tol), sequence_stats(seq));
  return kExitOk;
}

int cmd_constraint(double tol, const std::string& t1s, const std::string& t2s, std::ostream& out) {
  const Duration t1 = parse_duration(t1s);
  const Duration t2 = parse_duration(t2s);
  const Complex e = constraint_element(t1, t2);
  const double residual = std::abs(e);
  out << "t1 " << t1.str() << '\n'
      << "t2 " << t2.str() << '\n'
      << "E_re " << format_number(e.real()) << '\n'
      << "E_im " << format_number(e.imag()) << '\n'
      << "residual " << format_number(residual) << '\n';
  const bool ok = residual <= tol;
  out << (ok ? "solution" : "not a solution") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_synth_v(double tol, int max_pulses, int grid, std::ostream& out) {
  const auto found = search_v(max_pulses, grid, tol);
  for (const auto& c : found) {
    out << c.v.size() << " pulses: " << pulse_list(c.v)
        << " residual=" << format_number(c.residual) << '\n';
  }
  out << found.size() << " candidates\n";
  return found.empty() ? kExitCheckFailed : kExitOk;
}

int cmd_rewrite(
    double tol, const std::string& path, const std::string& script_path,
    const std::string& out_path, std::ostream& out) {
  const auto seq = load_sequence(path);
  const auto script = parse_script(read_text_file(script_path));
  const auto result = apply_script(seq, script);
  const auto report = check_rewrite_invariants(seq, result.sequence, tol);
  std::ostringstream summary;
  summary << script.size() << " steps, accumulated phase " << result.accumulated_phase.str()
          << '\n';
  print_checks(summary, report.checks);
  if (!out_path.empty()) {
    write_text_file(out_path, emit_sequence_file(result.sequence));
    out << summary.str();
  } else {
    out << emit_sequence_file(result.sequence, summary.str());
  }
  return report.ok ? kExitOk : kExitCheckFailed;
}

int cmd_stats(const std::string& path, std::ostream& out) {
  const auto seq = load_sequence(path);
  print_stats(out, sequence_stats(seq));
  const bool nearest = std::all_of(
      seq.pulses().begin(), seq.pulses().end(), [](const auto& p) { return p.j == p.i + 1; });
  out << "nearest_neighbor " << (nearest ? "yes" : "no") << '\n';
  return kExitOk;
}

int cmd_compare(double tol, const std::string& a, const std::string& b, std::ostream& out) {
  const auto rep = compare_sequences(load_sequence(a), load_sequence(b), tol);
  out << comparison_report(rep);
  return rep.phase_equal || rep.locally_equivalent ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exchange-pulse sequence toolkit", "exoseq"};
  app.require_subcommand(1);
  app.fallthrough();
  double tol = kCheckTol;
  app.add_option("--tol", tol, "numerical tolerance for checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string file, file_b, out_path, report_path, script_path, t1, t2;
  bool gate_flag = false, matrix_flag = false;
  int max_pulses = 2, grid = 24;

  auto* derive_cmd = app.add_subcommand("derive", "derive the gate sequence and check it");
  derive_cmd->add_option("--out", out_path, "sequence file to write");
  derive_cmd->add_option("--report", report_path, "JSON report to write");

  auto* verify_cmd = app.add_subcommand("verify", "check a gate or R sequence");
  verify_cmd->add_option("file", file)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "print a sequence's gate or unitary");
  simulate_cmd->add_option("file", file)->required();
  auto* gate_opt = simulate_cmd->add_flag("--gate", gate_flag, "encoded two-qubit gate (default)");
  auto* matrix_opt = simulate_cmd->add_flag("--matrix", matrix_flag, "full register unitary");
  gate_opt->excludes(matrix_opt);

  auto* constraint_cmd = app.add_subcommand("constraint", "evaluate the constraint element");
  constraint_cmd->add_option("--t1", t1, "first duration, P/Q")->required();
  constraint_cmd->add_option("--t2", t2, "second duration, P/Q")->required();

  auto* synth_cmd = app.add_subcommand("synth-v", "search short pulse words for V");
  synth_cmd->add_option("--max-pulses", max_pulses)
      ->check(CLI::Range(1, kMaxSearchPulses))
      ->capture_default_str();
  synth_cmd->add_option("--grid", grid)
      ->check(CLI::Range(1, static_cast<int>(kDefaultMaxDenominator)))
      ->capture_default_str();

  auto* rewrite_cmd = app.add_subcommand("rewrite", "apply a rewrite script");
  rewrite_cmd->add_option("file", file)->required();
  rewrite_cmd->add_option("--script", script_path)->required();
  rewrite_cmd->add_option("--out", out_path, "sequence file to write");

  auto* stats_cmd = app.add_subcommand("stats", "pulse counts and parity");
  stats_cmd->add_option("file", file)->required();

  auto* compare_cmd = app.add_subcommand("compare", "compare two sequences");
  compare_cmd->add_option("a", file)->required();
  compare_cmd->add_option("b", file_b)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "exoseq: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (derive_cmd->parsed()) return cmd_derive(tol, out_path, report_path, out);
    if (verify_cmd->parsed()) return cmd_verify(tol, file, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(tol, file, matrix_flag, out);
    if (constraint_cmd->parsed()) return cmd_constraint(tol, t1, t2, out);
    if (synth_cmd->parsed()) return cmd_synth_v(tol, max_pulses, grid, out);
    if (rewrite_cmd->parsed()) return cmd_rewrite(tol, file, script_path, out_path, out);
    if (stats_cmd->parsed()) return cmd_stats(file, out);
    if (compare_cmd->parsed()) return cmd_compare(tol, file, file_b, out);
  } catch (const std::exception& e) {
    err << "exoseq: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace exo
