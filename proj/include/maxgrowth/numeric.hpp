#ifndef MAXGROWTH_NUMERIC_HPP
#define MAXGROWTH_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace maxgrowth {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

//! Thrown when an operation's precondition is violated by its input.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! Thrown when a computation would exceed its declared work budget.
class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Thrown when a construction's own output fails its checked guarantees.
class postcondition_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline BigInt ipow(BigInt base, std::uint64_t e) {
  BigInt result = 1;
  while (e > 0) {
    if (e & 1u) {
      result *= base;
    }
    e >>= 1;
    if (e > 0) {
      base *= base;
    }
  }
  return result;
}

inline Rational rpow(Rational const& base, std::int64_t e) {
  if (e >= 0) {
    return Rational(ipow(numerator(base), e), ipow(denominator(base), e));
  }
  if (base == 0) {
    throw contract_error("rpow: zero to a negative power");
  }
  return Rational(ipow(denominator(base), -e), ipow(numerator(base), -e));
}

//! Decimal string of a big integer.
inline std::string to_string(BigInt const& x) {
  return x.str();
}

//! "p/q" form, or "p" when the denominator is 1.
inline std::string to_string(Rational const& x) {
  if (denominator(x) == 1) {
    return numerator(x).str();
  }
  return numerator(x).str() + "/" + denominator(x).str();
}

inline BigInt parse_bigint(std::string const& s) {
  if (s.empty()) {
    throw contract_error("empty integer string");
  }
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) {
    throw contract_error("malformed integer: " + s);
  }
  for (std::size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') {
      throw contract_error("malformed integer: " + s);
    }
  }
  return BigInt(s);
}

//! Accepts "p/q", "p", or a finite decimal such as "0.01".
inline Rational parse_rational(std::string const& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt q = parse_bigint(s.substr(slash + 1));
    if (q == 0) {
      throw contract_error("zero denominator: " + s);
    }
    return Rational(parse_bigint(s.substr(0, slash)), q);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string frac  = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    bool        neg   = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") {
      whole += "0";
    }
    if (frac.empty()) {
      throw contract_error("malformed decimal: " + s);
    }
    BigInt   w = parse_bigint(whole);
    BigInt   f = parse_bigint(frac);
    BigInt   d = ipow(BigInt(10), frac.size());
    Rational fr(f, d);
    return neg ? Rational(w) - fr : Rational(w) + fr;
  }
  return Rational(parse_bigint(s));
}

//! Smallest integer >= x.
inline BigInt ceil(Rational const& x) {
  BigInt q = numerator(x) / denominator(x);
  if (q * denominator(x) < numerator(x)) {
    ++q;
  }
  return q;
}

//! Largest integer <= x.
inline BigInt floor(Rational const& x) {
  BigInt q = numerator(x) / denominator(x);
  if (q * denominator(x) > numerator(x)) {
    --q;
  }
  return q;
}

inline double to_double(Rational const& x) {
  return static_cast<double>(x);
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_NUMERIC_HPP
