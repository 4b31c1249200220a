#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "exo/spin.hpp"

/**
 * Plain-text pulse sequences:
 *
 *   # comment
 *   nspins 6
 *   pulse 3 4 1/2
 *
 * Pulses are listed in chronological order. The header must come before
 * the first pulse.
 */
namespace exo {

class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

PulseSequence parse_sequence_file(std::string_view text);
std::string emit_sequence_file(const PulseSequence& seq, std::string_view comment = {});

/// Reads a whole file. Throws std::runtime_error if it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace exo
