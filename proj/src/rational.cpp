#include "tg/rational.hpp"

#include "tg/errors.hpp"

#include <cctype>

namespace tg {
namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Integer value = 0;
  for (char c : s) value = value * 10 + (c - '0');
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_integer_literal(num_text)) {
    throw ParseError(std::string(text), "not a rational literal");
  }
  if (slash == std::string_view::npos) return Rational(parse_integer(num_text));

  const auto den_text = text.substr(slash + 1);
  if (!is_integer_literal(den_text) || den_text.front() == '-' || den_text.front() == '+') {
    throw ParseError(std::string(text), "not a rational literal");
  }
  const Integer den = parse_integer(den_text);
  if (den == 0) throw ParseError(std::string(text), "zero denominator");
  return Rational(parse_integer(num_text), den);
}

std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

}  // namespace tg
