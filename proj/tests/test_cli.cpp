#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "exo/cli.hpp"
#include "exo/report.hpp"
#include "exo/sequence_file.hpp"
#include "json.hpp"

namespace exo {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("exoseq_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string data(const char* name) { return std::string(EXOSEQ_TEST_DATA) + "/" + name; }

std::string parse_error(const std::string& text) {
  try {
    parse_sequence_file(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "accepted";
}

int count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

TEST_CASE("Sequence file format", "[cli]") {
  const auto seq = parse_sequence_file(
      "# header comment\n"
      "nspins 4\n"
      "\n"
      "pulse 1 2 1/2   # trailing comment\n"
      "  pulse 2 3 3/2\r\n"
      "pulse 3 4 1\n");
  CHECK(seq == PulseSequence(
                   4, {{1, 2, Duration(1, 2)}, {2, 3, Duration(3, 2)}, {3, 4, Duration(1)}}));

  const auto derived = parse_sequence_file(read_text_file(data("derived.txt")));
  CHECK(derived.size() == 20);
  CHECK(parse_sequence_file(emit_sequence_file(derived)) == derived);
  CHECK(parse_sequence_file(emit_sequence_file(derived, "two\nlines")) == derived);
  CHECK(emit_sequence_file(PulseSequence(2, {{1, 2, Duration(1, 2)}})) ==
        "nspins 2\npulse 1 2 1/2\n");

  CHECK(parse_error("nspins 4\npulse 3 3 1/2\n") == "line 2: i = j");
  CHECK(parse_error("nspins 4\npulse 1 2 5/2\n") == "line 2: duration out of range");
  CHECK(parse_error("nspins 4\n\npulse 1 2 x\n") == "line 3: malformed rational");
  CHECK(parse_error("nspins 4\npulse 1 2 2/4\n") == "line 2: not in lowest terms");
  CHECK(parse_error("nspins 4\npulse 1 2 1/97\n") == "line 2: denominator exceeds 96");
  CHECK(parse_error("nspins 4\npulse 1 5 1\n").rfind("line 2: bad spin indices", 0) == 0);
  CHECK(parse_error("nspins 4\npulse 2 1 1\n").rfind("line 2: bad spin indices", 0) == 0);
  CHECK(parse_error("nspins 4\npulse 1 2\n") == "line 2: expected 'pulse I J P/Q'");
  CHECK(parse_error("pulse 1 2 1\n") == "line 1: pulse before nspins header");
  CHECK(parse_error("# nothing\n") == "line 2: missing nspins header");
  CHECK(parse_error("nspins 4\nnspins 4\n") == "line 2: duplicate nspins header");
  CHECK(parse_error("nspins 11\n").rfind("line 1: nspins must lie", 0) == 0);
  CHECK(parse_error("nspins 4\nswap 1 2\n") == "line 2: unknown directive 'swap'");
  CHECK(parse_error("nspins four\n") == "line 1: malformed spin count 'four'");

  CHECK_THROWS_AS(read_text_file("/nonexistent/file.txt"), std::runtime_error);
}

TEST_CASE("Report numbers", "[cli]") {
  CHECK(round15(-0.0) == 0.0);
  CHECK(!std::signbit(round15(-0.0)));
  CHECK(round15(0.1 + 0.2) == 0.3);
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-17) == "1e-17");
}

TEST_CASE("derive writes a 20-pulse sequence and a report", "[cli]") {
  TempDir dir;
  const auto r = run({"derive", "--out", dir.file("seq.txt"), "--report", dir.file("r.json")});
  REQUIRE(r.code == kExitOk);
  const std::string seq_text = read_text_file(dir.file("seq.txt"));
  CHECK(count_lines(seq_text, "pulse ") == 20);
  CHECK(seq_text == read_text_file(data("derived.txt")));

  const std::string report = read_text_file(dir.file("r.json"));
  const auto doc = nlohmann::json::parse(report);
  CHECK(doc["ok"] == true);
  for (const char* key : {"coefficients", "solutions", "stats", "gate", "checks"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["solutions"] == nlohmann::json::parse(R"([["1/2","3/2"],["3/2","1/2"]])"));
  CHECK(doc["stats"]["swap"] == 8);
  CHECK(doc["stats"]["sqrt"] == 6);
  CHECK(doc["stats"]["invsqrt"] == 6);
  CHECK(doc["stats"]["nontrivial"] == 12);
  CHECK(doc["stats"]["parity"] == 0);
  CHECK(doc["coefficients"]["F"].get<double>() == Catch::Approx(0.577350269189626));
  CHECK(doc["coefficients"].contains("alpha_im"));
  CHECK(doc["gate"]["matrix"].size() == 4);
  CHECK(doc["gate"]["matrix"][3].size() == 4);
  CHECK(doc["gate"]["matrix"][0][0]["re"] == 1.0);
  CHECK(doc["gate"]["nhat"].size() == 3);
  for (const char* key : {"leakage", "G1_re", "G1_im", "G2"}) CHECK(doc["gate"].contains(key));
  for (const auto& [name, check] : doc["checks"].items()) {
    INFO(name);
    CHECK(check["pass"] == true);
    CHECK(check["residual"].get<double>() <= check["tol"].get<double>());
  }

  // byte-identical on a second run
  REQUIRE(run({"derive", "--out", dir.file("seq2.txt"), "--report", dir.file("r2.json")}).code ==
          kExitOk);
  CHECK(read_text_file(dir.file("r2.json")) == report);
  CHECK(read_text_file(dir.file("seq2.txt")) == seq_text);

  // derive then verify its own output
  const auto v = run({"verify", dir.file("seq.txt")});
  CHECK(v.code == kExitOk);
  CHECK(count_lines(v.out, "PASS ") == 3);
}

TEST_CASE("verify flags a perturbed duration", "[cli]") {
  TempDir dir;
  auto pulses = parse_sequence_file(read_text_file(data("derived.txt"))).pulses();
  pulses[1].t = Duration::wrap(pulses[1].t.value() + Rational(1, 96));
  write_text_file(dir.file("bad.txt"), emit_sequence_file(PulseSequence(6, pulses)));
  const auto r = run({"verify", dir.file("bad.txt")});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.out.find("FAIL leakage") != std::string::npos);
  CHECK(r.out.find("FAILED") != std::string::npos);

  // four-spin files are checked as R
  write_text_file(dir.file("r.txt"),
                  "nspins 4\npulse 1 2 1/2\npulse 2 3 3/2\npulse 1 2 1\npulse 3 4 1\n"
                  "pulse 2 3 1/2\npulse 1 2 3/2\n");
  CHECK(run({"verify", dir.file("r.txt")}).code == kExitOk);
  write_text_file(dir.file("three.txt"), "nspins 3\npulse 1 2 1\n");
  CHECK(run({"verify", dir.file("three.txt")}).code == kExitUsage);
}

TEST_CASE("constraint", "[cli]") {
  const auto ok = run({"constraint", "--t1", "1/2", "--t2", "3/2"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("residual 0\n") != std::string::npos);
  CHECK(run({"constraint", "--t1", "3/2", "--t2", "1/2"}).code == kExitOk);

  const auto no = run({"constraint", "--t1", "1/2", "--t2", "1/2"});
  CHECK(no.code == kExitCheckFailed);
  CHECK(no.out.find("not a solution") != std::string::npos);

  const auto bad = run({"constraint", "--t1", "5/2", "--t2", "1/2"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("duration out of range") != std::string::npos);
  CHECK(run({"constraint", "--t1", "1/2"}).code == kExitUsage);
}

TEST_CASE("simulate, stats, synth-v, compare", "[cli]") {
  const auto gate = run({"simulate", data("derived.txt")});
  REQUIRE(gate.code == kExitOk);
  const auto g = nlohmann::json::parse(gate.out);
  CHECK(g["gate"]["class"] == "controlled-nsigma");
  CHECK(run({"simulate", "--gate", data("derived.txt")}).out == gate.out);

  const auto matrix = run({"simulate", "--matrix", data("derived.txt")});
  REQUIRE(matrix.code == kExitOk);
  const auto m = nlohmann::json::parse(matrix.out);
  CHECK(m["dimension"] == 64);
  CHECK(m["matrix"].size() == 64);
  CHECK(run({"simulate", "--gate", "--matrix", data("derived.txt")}).code == kExitUsage);

  const auto st = run({"stats", data("fw_surrogate.txt")});
  CHECK(st.code == kExitOk);
  CHECK(st.out.find("swap 6\nsqrt 3\ninvsqrt 9\n") == 0);
  CHECK(st.out.find("parity 1\n") != std::string::npos);
  CHECK(run({"stats", data("derived.txt")}).out.find("nearest_neighbor yes") != std::string::npos);

  const auto sv = run({"synth-v"});
  CHECK(sv.code == kExitOk);
  CHECK(sv.out.find("2 candidates") != std::string::npos);
  CHECK(run({"synth-v", "--max-pulses", "1"}).code == kExitCheckFailed);
  CHECK(run({"synth-v", "--max-pulses", "9"}).code == kExitUsage);
  CHECK(run({"synth-v", "--grid", "0"}).code == kExitUsage);

  const auto cmp = run({"compare", data("derived.txt"), data("fw_surrogate.txt")});
  CHECK(cmp.code == kExitOk);
  const auto c = nlohmann::json::parse(cmp.out);
  CHECK(c["phase_equal"] == false);
  CHECK(c["locally_equivalent"] == true);
  CHECK(c["parity_a"] == 0);
  CHECK(c["parity_b"] == 1);
}

TEST_CASE("rewrite", "[cli]") {
  TempDir dir;
  const auto r = run({"rewrite", data("derived.txt"), "--script", data("fw_surrogate.script"),
                      "--out", dir.file("core.txt")});
  CHECK(r.code == kExitOk);
  CHECK(count_lines(r.out, "PASS ") == 3);
  CHECK(parse_sequence_file(read_text_file(dir.file("core.txt"))).size() == 17);

  const auto inline_out =
      run({"rewrite", data("derived.txt"), "--script", data("fw_surrogate.script")});
  CHECK(inline_out.code == kExitOk);
  CHECK(parse_sequence_file(inline_out.out) ==
        parse_sequence_file(read_text_file(dir.file("core.txt"))));

  write_text_file(dir.file("bad.script"), "fuse at 1\n");
  const auto bad = run({"rewrite", data("derived.txt"), "--script", dir.file("bad.script")});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("fuse") != std::string::npos);
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"verify"}).code == kExitUsage);
  CHECK(run({"verify", "/nonexistent.txt"}).code == kExitUsage);
  CHECK(run({"--tol", "-1", "synth-v"}).code == kExitUsage);
  CHECK(run({"constraint", "--t1", "1/2", "--t2", "3/2", "--tol", "1e-3"}).code == kExitOk);
}

TEST_CASE("the installed binary reports exit codes", "[cli]") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(EXOSEQ_BINARY) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("constraint --t1 1/2 --t2 3/2") == 0);
  CHECK(status("constraint --t1 1/2 --t2 1/2") == 1);
  CHECK(status("constraint --t1 1/2") == 2);
  CHECK(status("verify " + data("derived.txt")) == 0);
}

}  // namespace
}  // namespace exo
