#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace kondratiev {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", integers and plain decimals ("-0.125"); decimals convert exactly.
Rational parse_rational(const std::string& text);

// Always "num/den" with den > 0.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

bool is_integer(const Rational& r);
Rational floor(const Rational& r);

// Integrability exponent: an exact rational >= 1, or infinity.
class Exponent {
 public:
  Exponent() : value_(1) {}
  explicit Exponent(Rational v) : value_(std::move(v)) {}
  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }
  static Exponent parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }
  double to_double() const;
  // d/p, zero for p = infinity
  Rational dim_ratio(int d) const;
  std::string str() const;

  friend bool operator==(const Exponent& x, const Exponent& y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.value_ == y.value_;
  }
  friend bool operator<(const Exponent& x, const Exponent& y) {
    if (x.infinite_) return false;
    if (y.infinite_) return true;
    return x.value_ < y.value_;
  }
  friend bool operator<=(const Exponent& x, const Exponent& y) { return !(y < x); }
  friend bool operator>(const Exponent& x, const Exponent& y) { return y < x; }

 private:
  Rational value_;
  bool infinite_ = false;
};

}  // namespace kondratiev
