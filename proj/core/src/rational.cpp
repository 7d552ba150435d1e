#include "pss/rational.hpp"

#include <cctype>

namespace pss {

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::optional<Rational> rational_from_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string digits;
  int frac_digits = -1;
  for (char ch : text) {
    if (ch == '.') {
      if (frac_digits >= 0) return std::nullopt;
      frac_digits = 0;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    digits.push_back(ch);
    if (frac_digits >= 0) ++frac_digits;
  }
  if (digits.empty()) return std::nullopt;
  // strip leading zeros; cpp_int would read "025" as octal
  std::size_t first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  BigInt num(digits);
  BigInt den = 1;
  for (int i = 0; i < std::max(frac_digits, 0); ++i) den *= 10;
  return Rational(num, den);
}

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  BigInt n = numerator(r), d = denominator(r);
  BigInt sn = boost::multiprecision::sqrt(n);
  BigInt sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace pss
