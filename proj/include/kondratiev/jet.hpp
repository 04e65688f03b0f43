#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace kondratiev {

constexpr int kMaxJetVars = 3;
constexpr int kMaxJetCoeffs = 120;  // three variables up to order 7

using MultiIndex = std::array<int, kMaxJetVars>;

// Monomial table for truncated Taylor polynomials in nvars variables.
// Monomials are ordered by total degree, then lexicographically (descending in x_0).
struct JetLayout {
  int nvars = 0;
  int order = 0;
  int size = 0;
  std::vector<MultiIndex> exps;
  std::vector<int> degree;
  std::vector<double> factorial;  // alpha! per monomial
  // flattened product table: out[k] += a[i] * b[j]
  std::vector<std::uint16_t> mul_i, mul_j, mul_k;
  std::vector<int> lookup;  // dense exponent -> index

  int index(const MultiIndex& e) const;

  // cached, thread-safe
  static const JetLayout& get(int nvars, int order);
  static int max_order(int nvars);
};

// Truncated multivariate Taylor polynomial: c[k] = (1/alpha!) d^alpha f.
class Jet {
 public:
  Jet() = default;
  explicit Jet(const JetLayout& L, double v = 0.0);
  // only the live coefficients are copied
  Jet(const Jet& o) : L_(o.L_) { copy_from(o); }
  Jet& operator=(const Jet& o) {
    L_ = o.L_;
    copy_from(o);
    return *this;
  }

  static Jet variable(const JetLayout& L, int i, double x);

  const JetLayout& layout() const { return *L_; }
  int size() const { return L_->size; }
  double value() const { return c_[0]; }
  double coeff(int k) const { return c_[k]; }
  double& coeff(int k) { return c_[k]; }
  // partial derivative d^alpha at the expansion point
  double derivative(const MultiIndex& alpha) const;
  bool is_zero() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  void copy_from(const Jet& o) {
    if (L_)
      for (int k = 0; k < L_->size; ++k) c_[k] = o.c_[k];
  }
  const JetLayout* L_ = nullptr;
  std::array<double, kMaxJetCoeffs> c_;
};

// f(g) given f^(k)(g(0)) for k = 0..order
Jet compose(const Jet& g, const double* fderiv);

Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet pow(const Jet& g, double s);
Jet reciprocal(const Jet& g);
Jet sqrt(const Jet& g);

}  // namespace kondratiev
