#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mutime {

// Exact probabilities. Every exact checker in the library works in this type.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) os << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "3/8", "0.25" or "1". Decimal input is converted exactly (0.1 becomes 1/10).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational num(boost::multiprecision::cpp_int(text.substr(0, slash)));
    Rational den(boost::multiprecision::cpp_int(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return num / den;
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t k = dot + 1; k < text.size(); ++k) scale *= 10;
    if (digits.empty() || digits == "-") digits += "0";
    return Rational(boost::multiprecision::cpp_int(digits)) / Rational(scale);
  }
  return Rational(boost::multiprecision::cpp_int(text));
}

inline Rational pow(const Rational& base, int exp) {
  Rational out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

}  // namespace mutime
