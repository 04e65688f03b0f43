#include "kondratiev/jet.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "kondratiev/errors.hpp"

namespace kondratiev {

namespace {

constexpr int kLookupBase = 16;

int lookup_key(const MultiIndex& e) { return (e[0] * kLookupBase + e[1]) * kLookupBase + e[2]; }

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

std::unique_ptr<JetLayout> build(int nvars, int order) {
  auto L = std::make_unique<JetLayout>();
  L->nvars = nvars;
  L->order = order;
  for (int deg = 0; deg <= order; ++deg) {
    // descending lexicographic within a degree
    if (nvars == 1) {
      L->exps.push_back({deg, 0, 0});
    } else if (nvars == 2) {
      for (int a = deg; a >= 0; --a) L->exps.push_back({a, deg - a, 0});
    } else {
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) L->exps.push_back({a, b, deg - a - b});
    }
  }
  L->size = static_cast<int>(L->exps.size());
  L->lookup.assign(kLookupBase * kLookupBase * kLookupBase, -1);
  for (int k = 0; k < L->size; ++k) {
    const auto& e = L->exps[k];
    L->degree.push_back(e[0] + e[1] + e[2]);
    double f = 1;
    for (int v = 0; v < 3; ++v)
      for (int t = 2; t <= e[v]; ++t) f *= t;
    L->factorial.push_back(f);
    L->lookup[lookup_key(e)] = k;
  }
  for (int i = 0; i < L->size; ++i)
    for (int j = 0; j < L->size; ++j) {
      if (L->degree[i] + L->degree[j] > order) continue;
      MultiIndex e{L->exps[i][0] + L->exps[j][0], L->exps[i][1] + L->exps[j][1], L->exps[i][2] + L->exps[j][2]};
      L->mul_i.push_back(static_cast<std::uint16_t>(i));
      L->mul_j.push_back(static_cast<std::uint16_t>(j));
      L->mul_k.push_back(static_cast<std::uint16_t>(L->lookup[lookup_key(e)]));
    }
  return L;
}

}  // namespace

int JetLayout::max_order(int nvars) {
  int k = 0;
  while (binom(k + 1 + nvars, nvars) <= kMaxJetCoeffs && k + 1 < kLookupBase) ++k;
  return k;
}

int JetLayout::index(const MultiIndex& e) const {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0) return -1;
  if (e[0] + e[1] + e[2] > order) return -1;
  for (int v = nvars; v < kMaxJetVars; ++v)
    if (e[v] != 0) return -1;
  return lookup[lookup_key(e)];
}

const JetLayout& JetLayout::get(int nvars, int order) {
  if (nvars < 1 || nvars > kMaxJetVars)
    fail(ErrorCode::OrderExceeded, "jets support 1 to 3 variables, got " + std::to_string(nvars));
  if (order < 0 || order > max_order(nvars))
    fail(ErrorCode::OrderExceeded, "derivative order " + std::to_string(order) + " exceeds the supported maximum " +
                                       std::to_string(max_order(nvars)) + " in " + std::to_string(nvars) + " variables");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = build(nvars, order);
  return *slot;
}

Jet::Jet(const JetLayout& L, double v) : L_(&L) {
  c_[0] = v;
  for (int k = 1; k < L.size; ++k) c_[k] = 0.0;
}

Jet Jet::variable(const JetLayout& L, int i, double x) {
  Jet j(L, x);
  if (L.order >= 1) {
    MultiIndex e{0, 0, 0};
    e[i] = 1;
    j.c_[L.index(e)] = 1.0;
  }
  return j;
}

double Jet::derivative(const MultiIndex& alpha) const {
  int k = L_->index(alpha);
  if (k < 0) fail(ErrorCode::OrderExceeded, "multi-index outside the jet");
  return c_[k] * L_->factorial[k];
}

bool Jet::is_zero() const {
  for (int k = 0; k < L_->size; ++k)
    if (c_[k] != 0.0) return false;
  return true;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int k = 0; k < L_->size; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int k = 0; k < L_->size; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int k = 0; k < L_->size; ++k) c_[k] *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout& L = *a.L_;
  Jet r(L, 0.0);
  const size_t n = L.mul_i.size();
  const std::uint16_t* I = L.mul_i.data();
  const std::uint16_t* J = L.mul_j.data();
  const std::uint16_t* K = L.mul_k.data();
  for (size_t t = 0; t < n; ++t) r.c_[K[t]] += a.c_[I[t]] * b.c_[J[t]];
  return r;
}

Jet compose(const Jet& g, const double* fderiv) {
  const JetLayout& L = g.layout();
  const int K = L.order;
  Jet delta = g;
  delta.coeff(0) = 0.0;
  double fact = 1;
  for (int k = 2; k <= K; ++k) fact *= k;
  Jet r(L, fderiv[K] / fact);
  for (int k = K - 1; k >= 0; --k) {
    fact /= (k + 1);
    r = r * delta;
    r.coeff(0) += fderiv[k] / fact;
  }
  return r;
}

Jet exp(const Jet& g) {
  double d[kMaxJetCoeffs];
  const double e = std::exp(g.value());
  for (int k = 0; k <= g.layout().order; ++k) d[k] = e;
  return compose(g, d);
}

Jet log(const Jet& g) {
  const double x = g.value();
  if (!(x > 0)) fail(ErrorCode::SingularPoint, "log of a non-positive value");
  double d[kMaxJetCoeffs];
  d[0] = std::log(x);
  double t = 1.0 / x;  // (k-1)! (-1)^{k-1} / x^k
  for (int k = 1; k <= g.layout().order; ++k) {
    d[k] = t;
    t *= -static_cast<double>(k) / x;
  }
  return compose(g, d);
}

Jet pow(const Jet& g, double s) {
  const double x = g.value();
  const int K = g.layout().order;
  if (!(x > 0)) {
    if (x == 0 && K == 0 && s > 0) return Jet(g.layout(), 0.0);
    fail(ErrorCode::SingularPoint, "power of a non-positive value");
  }
  double d[kMaxJetCoeffs];
  double coef = std::pow(x, s);
  for (int k = 0; k <= K; ++k) {
    d[k] = coef;
    coef *= (s - k) / x;
  }
  return compose(g, d);
}

Jet reciprocal(const Jet& g) {
  const double x = g.value();
  if (x == 0) fail(ErrorCode::SingularPoint, "reciprocal of zero");
  double d[kMaxJetCoeffs];
  double t = 1.0 / x;
  for (int k = 0; k <= g.layout().order; ++k) {
    d[k] = t;
    t *= -static_cast<double>(k + 1) / x;
  }
  return compose(g, d);
}

Jet sqrt(const Jet& g) { return pow(g, 0.5); }

}  // namespace kondratiev
