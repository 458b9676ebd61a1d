#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace dtheory {

/// Arbitrary-precision exact rational. Probabilities and utilities are
/// carried as Rationals end-to-end; nothing in the engine touches floating
/// point.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class value);

  /// Accepts `a`, `a/b`, and terminating decimals such as `-0.0125`.
  /// Exponent notation is rejected.
  static std::optional<Rational> parse(std::string_view text);
  /// As parse(), but throws std::invalid_argument.
  static Rational from_string(std::string_view text);

  /// 10^-exponent as an exact rational.
  static Rational pow10_inverse(unsigned exponent);

  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  bool is_integer() const;
  /// True when the value has a finite decimal expansion.
  bool is_terminating() const;

  /// Canonical literal: `n` for integers, `n/d` otherwise.
  std::string str() const;
  /// Exact decimal expansion when terminating; otherwise rounded
  /// half-away-from-zero to `places` digits. `exact` reports which.
  std::string decimal(unsigned places, bool* exact = nullptr) const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

/// Dollar rendering used by reports: `$1,001,000`, `-$1,000`, `$0.5`.
/// Non-terminating values are rounded to cents and prefixed with `~`.
std::string format_dollars(const Rational& value);

}  // namespace dtheory
