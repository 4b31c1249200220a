#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace exo {

using Rational = boost::rational<std::int64_t>;

/// Largest denominator accepted for a pulse duration unless the caller asks
/// for something else.
inline constexpr std::int64_t kDefaultMaxDenominator = 96;

/// A Gaussian integer, used for phases that are exact quarter turns.
using GaussianInt = std::complex<std::int64_t>;

/**
 * Exchange-pulse duration in units of 1/(pi J), stored as an exact rational
 * in [0, 2). A duration t produces the phase exp(-i pi t) on the triplet
 * sector of the pulsed pair; t = 1 is a SWAP, t = 1/2 a square-root SWAP
 * and t = 3/2 its inverse.
 */
class Duration {
 public:
  Duration() = default;

  /// Throws std::invalid_argument if num/den lies outside [0, 2) or the
  /// reduced denominator exceeds max_den.
  Duration(
      std::int64_t num, std::int64_t den = 1,
      std::int64_t max_den = kDefaultMaxDenominator);

  /// Reduces any rational modulo 2 into [0, 2).
  static Duration wrap(
      const Rational& r, std::int64_t max_den = kDefaultMaxDenominator);

  const Rational& value() const { return value_; }
  std::int64_t numerator() const { return value_.numerator(); }
  std::int64_t denominator() const { return value_.denominator(); }
  double to_double() const;

  /// Duration of the inverse pulse, (2 - t) mod 2.
  Duration inverse() const;

  bool is_identity() const { return value_ == Rational(0); }
  bool is_swap() const { return value_ == Rational(1); }
  bool is_sqrt_swap() const { return value_ == Rational(1, 2); }
  bool is_inverse_sqrt_swap() const { return value_ == Rational(3, 2); }

  /// exp(-i pi t). Quarter turns are returned exactly.
  std::complex<double> phase() const;

  /// exp(-i pi t) as a Gaussian integer when t is a multiple of 1/2.
  std::optional<GaussianInt> exact_phase() const;

  /// "0", "1", "1/2", "3/2", ...
  std::string str() const;

  friend bool operator==(const Duration& a, const Duration& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const Duration& a, const Duration& b) {
    return a.value_ < b.value_;
  }

  /// Composition of pulses on the same pair: U(a) U(b) = U((a + b) mod 2).
  friend Duration operator+(const Duration& a, const Duration& b);

 private:
  Rational value_{0};
};

/// Parses "P/Q" or "P". Throws std::invalid_argument with a short reason
/// ("malformed rational", "duration out of range", "not in lowest terms",
/// "denominator exceeds N").
Duration parse_duration(
    std::string_view text, std::int64_t max_den = kDefaultMaxDenominator);

/// Best rational approximation of x with denominator at most max_den
/// (continued fractions).
Rational nearest_rational(double x, std::int64_t max_den);

}  // namespace exo
