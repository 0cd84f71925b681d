// Exact rational scalar used for every probability, time, mass and payoff.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace stoptime {

// Always normalized: lowest terms, positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "p", "-p", "p/q" with q != 0.
inline Rational parse_rational(std::string_view text) {
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!digits_ok(num, true)) throw ParseError("bad rational: '" + std::string(text) + "'");
  std::string num_str(num);
  if (num_str.front() == '+') num_str.erase(0, 1);
  if (slash == std::string_view::npos) return Rational(Integer(num_str));

  const std::string_view den = text.substr(slash + 1);
  if (!digits_ok(den, false)) throw ParseError("bad rational: '" + std::string(text) + "'");
  Integer d{std::string(den)};
  if (d == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  return Rational(Integer(num_str), d);
}

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  const Integer& den = boost::multiprecision::denominator(q);
  std::string out = boost::multiprecision::numerator(q).str();
  if (den != 1) {
    out += '/';
    out += den.str();
  }
  return out;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace stoptime
