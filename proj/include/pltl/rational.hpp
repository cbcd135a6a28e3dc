#ifndef PLTL_RATIONAL_HPP
#define PLTL_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace pltl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "num/den", integers and plain decimals ("0.125"); conversion is exact.
// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

Rational pow(const Rational& base, unsigned exponent);

} // namespace pltl

#endif
