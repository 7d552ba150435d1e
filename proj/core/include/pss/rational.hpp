#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace pss {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" for non-integers, plain "p" otherwise.
std::string to_string(const Rational& r);

/// Exact conversion of an unsigned decimal literal ("3", "0.25", "1e3" is
/// not accepted). Returns nullopt on malformed input.
std::optional<Rational> rational_from_decimal(std::string_view text);

/// Exact square root when the argument is a perfect square of a rational.
std::optional<Rational> rational_sqrt(const Rational& r);

double to_double(const Rational& r);

}  // namespace pss
