#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace tg {

// Arbitrary-precision fraction, always kept in lowest terms with a positive
// denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Accepts "n", "-n" and "n/d" (d != 0). Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

// Canonical "num/den" form, e.g. "1/2", "-3/1", "0/1".
std::string to_string(const Rational& value);

}  // namespace tg
