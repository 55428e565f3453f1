#include "hyperfermi/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace hyperfermi {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer pow10(unsigned n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, n);
  return r;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational value(Integer(digits, 10));
  if (exponent > 0) {
    value *= Rational(pow10(static_cast<unsigned>(exponent)));
  } else if (exponent < 0) {
    value /= Rational(pow10(static_cast<unsigned>(-exponent)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
    num_digits.remove_prefix(1);
  }
  if (!all_digits(num_digits) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  Integer d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Integer n(std::string(num_digits), 10);
  if (!num.empty() && num.front() == '-') n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

double to_double(const Rational& value) {
  const auto& num = value.get_num();
  const auto& den = value.get_den();
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
    return num.get_d() / den.get_d();
  }
  return value.get_d();
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational generalized_binomial(const Rational& a, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= (a - i);
    r /= (i + 1);
  }
  return r;
}

std::vector<Rational> binomial_series(const Rational& a, unsigned order) {
  std::vector<Rational> out;
  out.reserve(order + 1);
  Rational c = 1;
  for (unsigned k = 0; k <= order; ++k) {
    out.push_back(c);
    c *= (a - k);
    c /= (k + 1);
  }
  return out;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  r.canonicalize();
  return r;
}

Rational exp_lower_bound(const Rational& x, unsigned terms) {
  if (x < 0) throw std::invalid_argument("exp_lower_bound needs x >= 0");
  Rational sum = 0;
  Rational term = 1;
  for (unsigned k = 0; k < terms; ++k) {
    sum += term;
    term *= x;
    term /= (k + 1);
  }
  return sum;
}

Rational exp_upper_bound(const Rational& x, unsigned terms) {
  if (x < 0 || x >= 1) throw std::invalid_argument("exp_upper_bound needs 0 <= x < 1");
  Rational sum = 0;
  Rational term = 1;
  for (unsigned k = 0; k < terms; ++k) {
    sum += term;
    term *= x;
    term /= (k + 1);
  }
  // remaining terms x^n/n! (n >= terms) are dominated by term * sum_j x^j
  return sum + term / (1 - x);
}

}  // namespace hyperfermi
