#include "dtheory/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace dtheory {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned exponent) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
  return out;
}

std::string group_thousands(const std::string& digits) {
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i != 0 && (n - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  value_ = mpq_class(numerator, 1);
  value_ /= denominator;
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

std::optional<Rational> Rational::parse(std::string_view text) {
  bool negative = false;
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) return std::nullopt;

  mpq_class value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    value = mpq_class(mpz_class(std::string(num), 10), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      return std::nullopt;
    }
    const std::string digits = std::string(whole) + std::string(frac);
    value = mpq_class(mpz_class(digits, 10), pow10(static_cast<unsigned>(frac.size())));
  } else {
    if (!all_digits(body)) return std::nullopt;
    value = mpq_class(mpz_class(std::string(body), 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

Rational Rational::from_string(std::string_view text) {
  auto r = parse(text);
  if (!r) throw std::invalid_argument("not an exact rational literal: '" + std::string(text) + "'");
  return *r;
}

Rational Rational::pow10_inverse(unsigned exponent) {
  return Rational(mpq_class(mpz_class(1), pow10(exponent)));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

bool Rational::is_terminating() const {
  mpz_class den = value_.get_den();
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) den /= 2;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) den /= 5;
  return den == 1;
}

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(unsigned places, bool* exact) const {
  const bool terminating = is_terminating();
  if (exact != nullptr) *exact = terminating;

  mpz_class num = abs(value_.get_num());
  const mpz_class den = value_.get_den();
  unsigned digits = places;
  if (terminating) {
    // Smallest scale 10^k that clears the denominator.
    digits = 0;
    mpz_class scale = 1;
    while (mpz_divisible_p(mpz_class(num * scale).get_mpz_t(), den.get_mpz_t()) == 0) {
      scale *= 10;
      ++digits;
    }
  }
  const mpz_class scale = pow10(digits);
  mpz_class scaled = num * scale;
  mpz_class q = scaled / den;
  const mpz_class r = scaled % den;
  if (!terminating && 2 * r >= den) q += 1;

  std::string s = q.get_str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
  }
  if (value_ < 0 && q != 0) s.insert(0, "-");
  return s;
}

std::string format_dollars(const Rational& value) {
  bool exact = true;
  const std::string dec = value.decimal(2, &exact);
  std::string_view body = dec;
  const bool negative = !body.empty() && body.front() == '-';
  if (negative) body.remove_prefix(1);
  const auto dot = body.find('.');
  std::string whole(body.substr(0, dot));
  std::string out = negative ? "-$" : "$";
  out += group_thousands(whole);
  if (dot != std::string_view::npos) out += body.substr(dot);
  return exact ? out : "~" + out;
}

}  // namespace dtheory
