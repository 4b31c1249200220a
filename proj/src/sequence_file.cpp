#include "exo/sequence_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace exo {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    if (k > start) words.push_back(line.substr(start, k - start));
  }
  return words;
}

int parse_int(std::string_view word, int line, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}

PulseSequence parse_sequence_file(std::string_view text) {
  PulseSequence seq;
  bool have_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto words = split_words(line);
    if (words.empty()) continue;

    if (words[0] == "nspins") {
      if (have_header) throw ParseError(line_no, "duplicate nspins header");
      if (words.size() != 2) throw ParseError(line_no, "expected 'nspins N'");
      const int n = parse_int(words[1], line_no, "spin count");
      if (n < 2 || n > kMaxSpins) {
        throw ParseError(line_no, "nspins must lie in [2, " + std::to_string(kMaxSpins) + "]");
      }
      seq = PulseSequence(n);
      have_header = true;
    } else if (words[0] == "pulse") {
      if (!have_header) throw ParseError(line_no, "pulse before nspins header");
      if (words.size() != 4) throw ParseError(line_no, "expected 'pulse I J P/Q'");
      const int i = parse_int(words[1], line_no, "spin index");
      const int j = parse_int(words[2], line_no, "spin index");
      try {
        validate_pair(seq.n_spins(), i, j);
      } catch (const std::out_of_range& e) {
        throw ParseError(line_no, e.what());
      }
      try {
        seq.push_back({i, j, parse_duration(words[3])});
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(words[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing nspins header");
  return seq;
}

std::string emit_sequence_file(const PulseSequence& seq, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::size_t start = 0;
    while (start < comment.size()) {
      std::size_t end = comment.find('\n', start);
      if (end == std::string_view::npos) end = comment.size();
      out << "# " << comment.substr(start, end - start) << '\n';
      start = end + 1;
    }
  }
  out << "nspins " << seq.n_spins() << '\n';
  for (const auto& p : seq.pulses()) {
    out << "pulse " << p.i << ' ' << p.j << ' ' << p.t.str() << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("error writing " + path);
}

}  // namespace exo
