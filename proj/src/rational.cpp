#include "kondratiev/rational.hpp"

#include <cctype>

#include "kondratiev/errors.hpp"

namespace kondratiev {

namespace {

using boost::multiprecision::cpp_int;

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

cpp_int parse_digits(const std::string& s, const std::string& whole) {
  if (s.empty()) fail(ErrorCode::InvalidParams, "malformed rational '" + whole + "'");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(ErrorCode::InvalidParams, "malformed rational '" + whole + "'");
  return cpp_int(s);
}

Rational parse_decimal(const std::string& t, const std::string& whole) {
  std::string s = t;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  auto dot = s.find('.');
  cpp_int num, den = 1;
  if (dot == std::string::npos) {
    num = parse_digits(s, whole);
  } else {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) fail(ErrorCode::InvalidParams, "malformed rational '" + whole + "'");
    num = ip.empty() ? cpp_int(0) : parse_digits(ip, whole);
    for (char c : fp) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(ErrorCode::InvalidParams, "malformed rational '" + whole + "'");
      num = num * 10 + (c - '0');
      den *= 10;
    }
  }
  Rational r(num, den);
  return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string::npos) return parse_decimal(t, text);
  Rational n = parse_decimal(trim(t.substr(0, slash)), text);
  Rational d = parse_decimal(trim(t.substr(slash + 1)), text);
  if (d == 0) fail(ErrorCode::InvalidParams, "zero denominator in '" + text + "'");
  return n / d;
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Rational floor(const Rational& r) {
  cpp_int n = numerator(r), d = denominator(r);
  cpp_int q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return Rational(q);
}

Exponent Exponent::parse(const std::string& text) {
  std::string t = trim(text);
  if (t == "inf" || t == "Infinity" || t == "infinity" || t == "oo") return infinity();
  Rational v = parse_rational(t);
  if (v < 1) fail(ErrorCode::InvalidParams, "integrability exponent must be >= 1, got '" + text + "'");
  return Exponent(v);
}

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : kondratiev::to_double(value_);
}

Rational Exponent::dim_ratio(int d) const {
  if (infinite_) return Rational(0);
  return Rational(d) / value_;
}

std::string Exponent::str() const { return infinite_ ? "inf" : to_string(value_); }

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::MixedIntegrability: return "mixed-integrability";
    case ErrorCode::PointOutsideDomain: return "point-outside-domain";
    case ErrorCode::ZeroWeight: return "zero-weight";
    case ErrorCode::DegeneratePolygon: return "degenerate-polygon";
    case ErrorCode::OrderExceeded: return "order-exceeded";
    case ErrorCode::SingularPoint: return "singular-point";
    case ErrorCode::UnboundedSupport: return "unbounded-support";
    case ErrorCode::SuiteUnknown: return "suite-unknown";
    case ErrorCode::QuadratureFailure: return "quadrature-failure";
  }
  return "error";
}

}  // namespace kondratiev
