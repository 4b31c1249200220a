#include "exo/duration.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace exo {

namespace {

void check_range(const Rational& r, std::int64_t max_den) {
  if (r < 0 || r >= 2) throw std::invalid_argument("duration out of range");
  if (r.denominator() > max_den) {
    throw std::invalid_argument(
        "denominator exceeds " + std::to_string(max_den));
  }
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Duration::Duration(std::int64_t num, std::int64_t den, std::int64_t max_den) {
  if (den == 0) throw std::invalid_argument("malformed rational");
  Rational r(num, den);
  check_range(r, max_den);
  value_ = r;
}

Duration Duration::wrap(const Rational& r, std::int64_t max_den) {
  // floor division by 2 on the rational
  Rational q = r / 2;
  std::int64_t fl = q.numerator() / q.denominator();
  if (q.numerator() < 0 && q.numerator() % q.denominator() != 0) --fl;
  Rational w = r - Rational(2 * fl);
  return Duration(w.numerator(), w.denominator(), max_den);
}

double Duration::to_double() const {
  return static_cast<double>(value_.numerator()) /
         static_cast<double>(value_.denominator());
}

Duration Duration::inverse() const {
  return wrap(Rational(2) - value_, value_.denominator());
}

std::optional<GaussianInt> Duration::exact_phase() const {
  if (value_ == Rational(0)) return GaussianInt(1, 0);
  if (value_ == Rational(1, 2)) return GaussianInt(0, -1);
  if (value_ == Rational(1)) return GaussianInt(-1, 0);
  if (value_ == Rational(3, 2)) return GaussianInt(0, 1);
  return std::nullopt;
}

std::complex<double> Duration::phase() const {
  if (auto e = exact_phase()) {
    return {static_cast<double>(e->real()), static_cast<double>(e->imag())};
  }
  const double angle = std::numbers::pi * to_double();
  return {std::cos(angle), -std::sin(angle)};
}

std::string Duration::str() const {
  if (value_.denominator() == 1) return std::to_string(value_.numerator());
  return std::to_string(value_.numerator()) + "/" +
         std::to_string(value_.denominator());
}

Duration operator+(const Duration& a, const Duration& b) {
  const Rational sum = a.value_ + b.value_;
  return Duration::wrap(sum, sum.denominator());
}

Duration parse_duration(std::string_view text, std::int64_t max_den) {
  const auto slash = text.find('/');
  std::optional<std::int64_t> num, den;
  if (slash == std::string_view::npos) {
    num = parse_int(text);
    den = 1;
  } else {
    num = parse_int(text.substr(0, slash));
    den = parse_int(text.substr(slash + 1));
  }
  if (!num || !den || *den <= 0) {
    throw std::invalid_argument("malformed rational");
  }
  Rational r(*num, *den);
  check_range(r, max_den);
  if (r.denominator() != *den) {
    throw std::invalid_argument("not in lowest terms");
  }
  return Duration(*num, *den, max_den);
}

Rational nearest_rational(double x, std::int64_t max_den) {
  if (max_den < 1) throw std::invalid_argument("max_den must be positive");
  const double fl = std::floor(x);
  const double frac = x - fl;
  // convergents of the fractional part
  std::int64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  double rem = frac;
  for (int iter = 0; iter < 64; ++iter) {
    if (rem == 0.0) break;
    const double inv = 1.0 / rem;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_den) {
      // best semiconvergent within the bound
      const std::int64_t k = (max_den - q0) / q1;
      const Rational semi(p0 + k * p1, q0 + k * q1);
      const Rational conv(p1, q1);
      auto err = [frac](const Rational& r) {
        return std::abs(
            frac - static_cast<double>(r.numerator()) / r.denominator());
      };
      const Rational best = err(semi) < err(conv) ? semi : conv;
      return best + Rational(static_cast<std::int64_t>(fl));
    }
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    rem = inv - static_cast<double>(a);
    if (std::abs(frac - static_cast<double>(p1) / q1) < 1e-15) break;
  }
  return Rational(p1, q1) + Rational(static_cast<std::int64_t>(fl));
}

}  // namespace exo
