#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kondratiev/domain.hpp"
#include "kondratiev/jet.hpp"

namespace kondratiev {

struct Ball {
  std::vector<double> center;
  double radius = 0;
};

// Where a function can be non-zero: inside a box, inside every listed ball and,
// when set, at distance to M within (rho_lo, rho_hi).
struct Support {
  int d = 0;
  std::vector<double> lo, hi;
  std::vector<Ball> balls;
  double rho_lo = 0;
  double rho_hi = std::numeric_limits<double>::infinity();

  static Support whole(int d);
  bool empty() const;
  bool bounded() const;
  bool excludes(std::span<const double> x) const;
  void add_ball(Ball b);
};

struct Node;

class TestFunction {
 public:
  static TestFunction constant(double c);
  // |x'|^b with x' the first d - l coordinates, no cap
  static TestFunction rho_power(double b, int l = 0);
  // |x - x0|^{-alpha} psi(x - x0); empty x0 means the origin
  static TestFunction f_alpha(double alpha, std::vector<double> x0 = {});
  static TestFunction bump(std::vector<double> center, double radius);
  static TestFunction psi();
  // rho~^b and the partition function phi_j of a domain
  static TestFunction rho_tilde(double b, const DomainSpec& dom);
  static TestFunction partition(int j, const DomainSpec& dom);

  TestFunction dilate(double lambda) const;
  TestFunction translate(std::vector<double> shift) const;
  TestFunction scale(double c) const;
  TestFunction with_max_order(int k) const;

  friend TestFunction operator*(const TestFunction& u, const TestFunction& v);
  friend TestFunction operator+(const TestFunction& u, const TestFunction& v);
  friend TestFunction operator-(const TestFunction& u, const TestFunction& v);

  // Taylor jet of the function at the expansion point of X (d coordinates).
  Jet eval(const Jet* X, int d) const;
  double eval_derivative(const MultiIndex& alpha, std::span<const double> x) const;
  double value(std::span<const double> x) const;

  Support support(int d) const;
  // top-level terms of a sum; {*this} otherwise
  std::vector<TestFunction> summands() const;
  int max_order() const { return max_order_; }
  std::string str() const;

  const Node& root() const { return *root_; }

 private:
  explicit TestFunction(std::shared_ptr<const Node> n, int k = 6) : root_(std::move(n)), max_order_(k) {}
  std::shared_ptr<const Node> root_;
  int max_order_ = 6;
};

TestFunction dilate(const TestFunction& tf, double lambda);
TestFunction multiply(const TestFunction& u, const TestFunction& v);

// Expression syntax, e.g. "rho_pow(b=-0.4)*psi()", "dilate(2, f_alpha(a=0.4)*bump(r=1))".
// dom supplies l for rho_pow and the domain of rho_tilde / phi.
TestFunction parse_function(const std::string& text, const DomainSpec* dom = nullptr);

}  // namespace kondratiev
