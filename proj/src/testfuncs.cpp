#include "kondratiev/testfuncs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "kondratiev/errors.hpp"
#include "kondratiev/geometry.hpp"
#include "kondratiev/profiles.hpp"
#include "kondratiev/rational.hpp"

namespace kondratiev {

enum class Kind { Constant, RhoPower, FAlpha, Bump, Psi, RhoTilde, Partition, Dilate, Translate, Product, Sum, Scale };

struct Node {
  Kind kind = Kind::Constant;
  double p = 0;  // constant, exponent, alpha, radius, lambda or scale factor
  int l = 0;
  int j = 0;
  std::vector<double> vec;  // centre, x0 or shift
  std::shared_ptr<const DomainSpec> dom;
  std::vector<std::shared_ptr<const Node>> kids;
};

using NodePtr = std::shared_ptr<const Node>;

namespace {

double at(const std::vector<double>& v, int i) { return i < static_cast<int>(v.size()) ? v[i] : 0.0; }

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string vec_str(const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + "]";
}

NodePtr leaf(Kind k, double p = 0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->p = p;
  return n;
}

bool bounded(const Node& n) {
  switch (n.kind) {
    case Kind::Bump:
    case Kind::Psi:
    case Kind::FAlpha:
    case Kind::Partition: return true;
    case Kind::Dilate:
    case Kind::Translate:
    case Kind::Scale: return bounded(*n.kids[0]);
    case Kind::Product:
      return std::any_of(n.kids.begin(), n.kids.end(), [](const NodePtr& k) { return bounded(*k); });
    case Kind::Sum:
      return std::all_of(n.kids.begin(), n.kids.end(), [](const NodePtr& k) { return bounded(*k); });
    default: return false;
  }
}

Jet sum_squares(const Jet* X, int k, const std::vector<double>& shift, double inv_r2 = 1.0) {
  const JetLayout& L = X[0].layout();
  Jet s(L, 0.0);
  for (int i = 0; i < k; ++i) {
    Jet y = X[i];
    y += -at(shift, i);
    s += y * y;
  }
  if (inv_r2 != 1.0) s *= inv_r2;
  return s;
}

Jet psi_of(const Jet& s) {
  const JetLayout& L = s.layout();
  if (s.value() <= 1.0) return Jet(L, 1.0);
  if (s.value() >= 2.25) return Jet(L, 0.0);
  Jet r = sqrt(s);
  double c[kMaxJetCoeffs];
  cutoff_profile(r.value(), L.order, c);
  return compose(r, c);
}

Jet eval_node(const Node& n, const Jet* X, int d) {
  const JetLayout& L = X[0].layout();
  switch (n.kind) {
    case Kind::Constant: return Jet(L, n.p);
    case Kind::RhoPower: {
      const int k = d - n.l;
      if (k < 1) fail(ErrorCode::InvalidParams, "rho_pow needs l < d");
      if (n.p == 0) return Jet(L, 1.0);
      Jet s = sum_squares(X, k, {});
      const double half = n.p / 2;
      if (half > 0 && half == std::floor(half) && half <= 16) {
        Jet r(L, 1.0);
        for (int i = 0; i < static_cast<int>(half); ++i) r = r * s;
        return r;
      }
      if (!(s.value() > 0)) fail(ErrorCode::SingularPoint, "rho_pow evaluated on the singular set");
      return pow(s, half);
    }
    case Kind::FAlpha: {
      Jet s = sum_squares(X, d, n.vec);
      if (s.value() >= 2.25) return Jet(L, 0.0);
      if (n.p == 0) return psi_of(s);
      if (!(s.value() > 0)) fail(ErrorCode::SingularPoint, "f_alpha evaluated at its centre");
      return pow(s, -n.p / 2) * psi_of(s);
    }
    case Kind::Bump: {
      Jet s = sum_squares(X, d, n.vec, 1.0 / (n.p * n.p));
      if (s.value() >= 1.0) return Jet(L, 0.0);
      double b[kMaxJetCoeffs];
      bump_profile(s.value(), L.order, b);
      return compose(s, b);
    }
    case Kind::Psi: return psi_of(sum_squares(X, d, {}));
    case Kind::RhoTilde: {
      if (n.dom->d != d) fail(ErrorCode::InvalidParams, "rho_tilde domain dimension mismatch");
      Jet r = regularized_weight(*n.dom, X);
      return n.p == 0 ? Jet(L, 1.0) : pow(r, n.p);
    }
    case Kind::Partition: {
      if (n.dom->d != d) fail(ErrorCode::InvalidParams, "phi domain dimension mismatch");
      return partition_jet(PartitionSpec::for_domain(*n.dom), *n.dom, n.j, X);
    }
    case Kind::Dilate: {
      Jet Y[kMaxJetVars] = {Jet(L), Jet(L), Jet(L)};
      for (int i = 0; i < d; ++i) Y[i] = X[i] * n.p;
      return eval_node(*n.kids[0], Y, d);
    }
    case Kind::Translate: {
      Jet Y[kMaxJetVars] = {Jet(L), Jet(L), Jet(L)};
      for (int i = 0; i < d; ++i) {
        Y[i] = X[i];
        Y[i] += -at(n.vec, i);
      }
      return eval_node(*n.kids[0], Y, d);
    }
    case Kind::Scale: return eval_node(*n.kids[0], X, d) * n.p;
    case Kind::Sum: {
      Jet s(L, 0.0);
      for (const auto& k : n.kids) s += eval_node(*k, X, d);
      return s;
    }
    case Kind::Product: {
      // compactly supported factors first, so singular factors are skipped where the product vanishes
      Jet acc(L, 1.0);
      bool first = true;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& k : n.kids) {
          if (bounded(*k) != (pass == 0)) continue;
          Jet f = eval_node(*k, X, d);
          if (f.is_zero()) return Jet(L, 0.0);
          acc = first ? f : acc * f;
          first = false;
        }
      return acc;
    }
  }
  return Jet(L, 0.0);
}

void box_intersect(Support& s, const Support& o) {
  for (int i = 0; i < s.d; ++i) {
    s.lo[i] = std::max(s.lo[i], o.lo[i]);
    s.hi[i] = std::min(s.hi[i], o.hi[i]);
  }
}

Support support_of(const Node& n, int d) {
  Support s = Support::whole(d);
  switch (n.kind) {
    case Kind::FAlpha: {
      Ball b{std::vector<double>(d), 1.5};
      for (int i = 0; i < d; ++i) b.center[i] = at(n.vec, i);
      s.add_ball(b);
      break;
    }
    case Kind::Bump: {
      Ball b{std::vector<double>(d), n.p};
      for (int i = 0; i < d; ++i) b.center[i] = at(n.vec, i);
      s.add_ball(b);
      break;
    }
    case Kind::Psi: s.add_ball({std::vector<double>(d, 0.0), 1.5}); break;
    case Kind::Partition: {
      auto spec = PartitionSpec::for_domain(*n.dom);
      if (n.j < spec.j1) {
        s.rho_hi = 0;
        break;
      }
      // phi_j vanishes unless |log2(2^j rho~)| < 3/4, and 7/8 rho <= rho~ <= rho off the polyhedral cone
      const double slack = n.dom->kind == DomainKind::PolyhedralCone ? 1.0 / 0.92 : 8.0 / 7.0;
      s.rho_lo = std::ldexp(std::pow(2.0, -0.75), -n.j);
      if (n.j > spec.j1) s.rho_hi = std::ldexp(std::pow(2.0, 0.75), -n.j) * slack;
      break;
    }
    case Kind::Dilate: {
      Support c = support_of(*n.kids[0], d);
      for (int i = 0; i < d; ++i) {
        s.lo[i] = c.lo[i] / n.p;
        s.hi[i] = c.hi[i] / n.p;
      }
      for (auto b : c.balls) {
        for (auto& v : b.center) v /= n.p;
        b.radius /= n.p;
        s.balls.push_back(b);
      }
      break;
    }
    case Kind::Translate: {
      Support c = support_of(*n.kids[0], d);
      for (int i = 0; i < d; ++i) {
        s.lo[i] = c.lo[i] + at(n.vec, i);
        s.hi[i] = c.hi[i] + at(n.vec, i);
      }
      for (auto b : c.balls) {
        for (int i = 0; i < d; ++i) b.center[i] += at(n.vec, i);
        s.balls.push_back(b);
      }
      break;
    }
    case Kind::Scale: return n.p == 0 ? Support{d, std::vector<double>(d, 0), std::vector<double>(d, -1), {}, 0, 0}
                                      : support_of(*n.kids[0], d);
    case Kind::Product:
      for (const auto& k : n.kids) {
        Support c = support_of(*k, d);
        box_intersect(s, c);
        for (auto& b : c.balls) s.balls.push_back(b);
        s.rho_lo = std::max(s.rho_lo, c.rho_lo);
        s.rho_hi = std::min(s.rho_hi, c.rho_hi);
      }
      break;
    case Kind::Sum: {
      bool firstk = true;
      for (const auto& k : n.kids) {
        Support c = support_of(*k, d);
        if (c.empty()) continue;
        if (firstk) {
          s.lo = c.lo;
          s.hi = c.hi;
          s.rho_lo = c.rho_lo;
          s.rho_hi = c.rho_hi;
          firstk = false;
        } else {
          for (int i = 0; i < d; ++i) {
            s.lo[i] = std::min(s.lo[i], c.lo[i]);
            s.hi[i] = std::max(s.hi[i], c.hi[i]);
          }
          s.rho_lo = std::min(s.rho_lo, c.rho_lo);
          s.rho_hi = std::max(s.rho_hi, c.rho_hi);
        }
      }
      break;
    }
    default: break;
  }
  return s;
}

std::string node_str(const Node& n) {
  switch (n.kind) {
    case Kind::Constant: return num(n.p);
    case Kind::RhoPower: return "rho_pow(b=" + num(n.p) + ",l=" + std::to_string(n.l) + ")";
    case Kind::FAlpha: return "f_alpha(a=" + num(n.p) + (n.vec.empty() ? "" : ",x0=" + vec_str(n.vec)) + ")";
    case Kind::Bump: return "bump(r=" + num(n.p) + (n.vec.empty() ? "" : ",c=" + vec_str(n.vec)) + ")";
    case Kind::Psi: return "psi()";
    case Kind::RhoTilde: return "rho_tilde(b=" + num(n.p) + ")";
    case Kind::Partition: return "phi(j=" + std::to_string(n.j) + ")";
    case Kind::Dilate: return "dilate(" + num(n.p) + "," + node_str(*n.kids[0]) + ")";
    case Kind::Translate: return "translate(" + vec_str(n.vec) + "," + node_str(*n.kids[0]) + ")";
    case Kind::Scale: return "scale(" + num(n.p) + "," + node_str(*n.kids[0]) + ")";
    case Kind::Product: {
      std::string s;
      for (const auto& k : n.kids) {
        if (!s.empty()) s += "*";
        s += node_str(*k);
      }
      return s;
    }
    case Kind::Sum: {
      std::string s = "(";
      for (size_t i = 0; i < n.kids.size(); ++i) s += (i ? "+" : "") + node_str(*n.kids[i]);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

Support Support::whole(int d) {
  Support s;
  s.d = d;
  s.lo.assign(d, -std::numeric_limits<double>::infinity());
  s.hi.assign(d, std::numeric_limits<double>::infinity());
  return s;
}

bool Support::empty() const {
  for (int i = 0; i < d; ++i)
    if (!(lo[i] < hi[i])) return true;
  return !(rho_lo < rho_hi);
}

bool Support::bounded() const {
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
  return true;
}

bool Support::excludes(std::span<const double> x) const {
  for (int i = 0; i < d; ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return true;
  for (const auto& b : balls) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += (x[i] - b.center[i]) * (x[i] - b.center[i]);
    if (s >= b.radius * b.radius) return true;
  }
  return false;
}

void Support::add_ball(Ball b) {
  for (int i = 0; i < d; ++i) {
    lo[i] = std::max(lo[i], b.center[i] - b.radius);
    hi[i] = std::min(hi[i], b.center[i] + b.radius);
  }
  balls.push_back(std::move(b));
}

TestFunction TestFunction::constant(double c) { return TestFunction(leaf(Kind::Constant, c)); }

TestFunction TestFunction::rho_power(double b, int l) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::RhoPower;
  n->p = b;
  n->l = l;
  return TestFunction(n);
}

TestFunction TestFunction::f_alpha(double alpha, std::vector<double> x0) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::FAlpha;
  n->p = alpha;
  n->vec = std::move(x0);
  return TestFunction(n);
}

TestFunction TestFunction::bump(std::vector<double> center, double radius) {
  if (!(radius > 0)) fail(ErrorCode::InvalidParams, "bump radius must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bump;
  n->p = radius;
  n->vec = std::move(center);
  return TestFunction(n);
}

TestFunction TestFunction::psi() { return TestFunction(leaf(Kind::Psi)); }

TestFunction TestFunction::rho_tilde(double b, const DomainSpec& dom) {
  dom.validate();
  auto n = std::make_shared<Node>();
  n->kind = Kind::RhoTilde;
  n->p = b;
  n->dom = std::make_shared<DomainSpec>(dom);
  return TestFunction(n);
}

TestFunction TestFunction::partition(int j, const DomainSpec& dom) {
  dom.validate();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Partition;
  n->j = j;
  n->dom = std::make_shared<DomainSpec>(dom);
  return TestFunction(n);
}

TestFunction TestFunction::dilate(double lambda) const {
  if (!(lambda > 0)) fail(ErrorCode::InvalidParams, "dilation factor must be positive");
  if (root_->kind == Kind::Dilate)  // u((mu lambda) x)
    return root_->kids[0] == nullptr ? *this
                                     : TestFunction(root_->kids[0], max_order_).dilate(lambda * root_->p);
  if (lambda == 1) return *this;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Dilate;
  n->p = lambda;
  n->kids = {root_};
  return TestFunction(n, max_order_);
}

TestFunction TestFunction::translate(std::vector<double> shift) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Translate;
  n->vec = std::move(shift);
  n->kids = {root_};
  return TestFunction(n, max_order_);
}

TestFunction TestFunction::scale(double c) const {
  if (c == 1) return *this;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scale;
  n->p = c;
  n->kids = {root_};
  return TestFunction(n, max_order_);
}

TestFunction TestFunction::with_max_order(int k) const {
  if (k < 0 || k > JetLayout::max_order(kMaxJetVars))
    fail(ErrorCode::OrderExceeded, "maximal order must lie in [0, " +
                                       std::to_string(JetLayout::max_order(kMaxJetVars)) + "]");
  return TestFunction(root_, k);
}

TestFunction operator*(const TestFunction& u, const TestFunction& v) {
  std::vector<NodePtr> factors;
  for (const TestFunction* t : {&u, &v}) {
    if (t->root_->kind == Kind::Product)
      for (const auto& k : t->root_->kids) factors.push_back(k);
    else
      factors.push_back(t->root_);
  }
  double c = 1;
  std::vector<NodePtr> out;
  for (const auto& f : factors) {
    if (f->kind == Kind::Constant) {
      c *= f->p;
      continue;
    }
    if (f->kind == Kind::RhoPower) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const NodePtr& o) { return o->kind == Kind::RhoPower && o->l == f->l; });
      if (it != out.end()) {
        auto merged = std::make_shared<Node>(**it);
        merged->p += f->p;
        *it = merged;
        continue;
      }
    }
    out.push_back(f);
  }
  const int k = std::min(u.max_order_, v.max_order_);
  if (c != 1 || out.empty()) out.insert(out.begin(), leaf(Kind::Constant, c));
  if (out.size() == 1) return TestFunction(out[0], k);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->kids = std::move(out);
  return TestFunction(n, k);
}

TestFunction operator+(const TestFunction& u, const TestFunction& v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  for (const TestFunction* t : {&u, &v}) {
    if (t->root_->kind == Kind::Sum)
      for (const auto& k : t->root_->kids) n->kids.push_back(k);
    else
      n->kids.push_back(t->root_);
  }
  return TestFunction(n, std::min(u.max_order_, v.max_order_));
}

TestFunction operator-(const TestFunction& u, const TestFunction& v) { return u + v.scale(-1.0); }

Jet TestFunction::eval(const Jet* X, int d) const {
  if (X[0].layout().order > max_order_)
    fail(ErrorCode::OrderExceeded, "derivative order " + std::to_string(X[0].layout().order) +
                                       " exceeds the function's maximal order " + std::to_string(max_order_));
  return eval_node(*root_, X, d);
}

double TestFunction::eval_derivative(const MultiIndex& alpha, std::span<const double> x) const {
  const int d = static_cast<int>(x.size());
  const int k = alpha[0] + alpha[1] + alpha[2];
  if (k > max_order_) fail(ErrorCode::OrderExceeded, "derivative order exceeds the function's maximal order");
  const JetLayout& L = JetLayout::get(d, k);
  Jet X[kMaxJetVars] = {Jet(L), Jet(L), Jet(L)};
  for (int i = 0; i < d; ++i) X[i] = Jet::variable(L, i, x[i]);
  return eval(X, d).derivative(alpha);
}

double TestFunction::value(std::span<const double> x) const { return eval_derivative({0, 0, 0}, x); }

Support TestFunction::support(int d) const { return support_of(*root_, d); }

std::vector<TestFunction> TestFunction::summands() const {
  if (root_->kind != Kind::Sum) return {*this};
  std::vector<TestFunction> out;
  for (const auto& k : root_->kids) out.push_back(TestFunction(k, max_order_));
  return out;
}

std::string TestFunction::str() const { return node_str(*root_); }

TestFunction dilate(const TestFunction& tf, double lambda) { return tf.dilate(lambda); }
TestFunction multiply(const TestFunction& u, const TestFunction& v) { return u * v; }

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(const std::string& s, const DomainSpec* dom) : s_(s), dom_(dom) {}

  TestFunction parse() {
    TestFunction t = expr();
    skip();
    if (i_ != s_.size()) error("unexpected '" + s_.substr(i_, 1) + "'");
    return t;
  }

 private:
  const std::string& s_;
  const DomainSpec* dom_;
  size_t i_ = 0;

  [[noreturn]] void error(const std::string& m) {
    fail(ErrorCode::InvalidParams, "function expression, position " + std::to_string(i_) + ": " + m);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }
  bool peek_number() {
    skip();
    return i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' ||
                              ((s_[i_] == '-' || s_[i_] == '+') && i_ + 1 < s_.size() &&
                               (std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) || s_[i_ + 1] == '.')));
  }
  double number() {
    skip();
    size_t b = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' ||
                              s_[i_] == 'e' || s_[i_] == 'E' ||
                              ((s_[i_] == '-' || s_[i_] == '+') && (s_[i_ - 1] == 'e' || s_[i_ - 1] == 'E'))))
      ++i_;
    std::string tok = s_.substr(b, i_ - b);
    // exact rational forms "p/q" are accepted where a literal is expected
    if (i_ < s_.size() && s_[i_] == '/' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      ++i_;
      size_t c = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      tok += "/" + s_.substr(c, i_ - c);
    }
    if (tok.empty()) error("expected a number");
    if (tok.find_first_of("eE") != std::string::npos) {
      double v = 0;
      auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) error("bad number '" + tok + "'");
      return v;
    }
    return to_double(parse_rational(tok));
  }
  std::vector<double> vector() {
    expect('[');
    std::vector<double> v;
    if (eat(']')) return v;
    do v.push_back(number());
    while (eat(','));
    expect(']');
    return v;
  }
  std::string ident() {
    skip();
    size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (b == i_) error("expected a name");
    return s_.substr(b, i_ - b);
  }

  TestFunction expr() {
    TestFunction t = term();
    while (true) {
      if (eat('+'))
        t = t + term();
      else if (peek_minus())
        t = t - term();
      else
        break;
    }
    return t;
  }
  bool peek_minus() {
    skip();
    if (i_ < s_.size() && s_[i_] == '-') {
      ++i_;
      return true;
    }
    return false;
  }
  TestFunction term() {
    TestFunction t = factor();
    while (eat('*')) t = t * factor();
    return t;
  }
  TestFunction factor() {
    skip();
    if (eat('(')) {
      TestFunction t = expr();
      expect(')');
      return t;
    }
    if (peek_number()) return TestFunction::constant(number());
    if (eat('-')) return factor().scale(-1.0);
    return call();
  }

  struct Args {
    std::vector<std::pair<std::string, std::string>> kv;
  };

  // key=value list; values are numbers or vectors kept as text and parsed on demand
  double get(std::vector<std::pair<std::string, double>>& named, const std::string& key, double dflt, bool required) {
    for (auto& [k, v] : named)
      if (k == key) return v;
    if (required) error("missing argument '" + key + "'");
    return dflt;
  }

  TestFunction call() {
    std::string name = ident();
    expect('(');
    if (name == "dilate" || name == "scale") {
      double a = number();
      expect(',');
      TestFunction t = expr();
      expect(')');
      return name == "dilate" ? t.dilate(a) : t.scale(a);
    }
    if (name == "translate") {
      std::vector<double> v = vector();
      expect(',');
      TestFunction t = expr();
      expect(')');
      return t.translate(v);
    }
    std::vector<std::pair<std::string, double>> named;
    std::vector<std::pair<std::string, std::vector<double>>> vecs;
    if (!eat(')')) {
      do {
        std::string key = ident();
        expect('=');
        skip();
        if (i_ < s_.size() && s_[i_] == '[')
          vecs.emplace_back(key, vector());
        else
          named.emplace_back(key, number());
      } while (eat(','));
      expect(')');
    }
    auto getv = [&](const std::string& key) {
      for (auto& [k, v] : vecs)
        if (k == key) return v;
      return std::vector<double>{};
    };
    auto allow = [&](std::initializer_list<const char*> keys) {
      auto ok = [&](const std::string& k) {
        for (const char* a : keys)
          if (k == a) return true;
        return false;
      };
      for (auto& [k, v] : named)
        if (!ok(k)) error("unknown argument '" + k + "' for " + name);
      for (auto& [k, v] : vecs)
        if (!ok(k)) error("unknown argument '" + k + "' for " + name);
    };
    if (name == "rho_pow") {
      allow({"b", "l"});
      int dl = dom_ ? dom_->singular_dim() : 0;
      if (dom_ && dom_->kind == DomainKind::SmoothCone) dl = 0;
      return TestFunction::rho_power(get(named, "b", 0, true), static_cast<int>(get(named, "l", dl, false)));
    }
    if (name == "psi") {
      allow({});
      return TestFunction::psi();
    }
    if (name == "const") {
      allow({"c"});
      return TestFunction::constant(get(named, "c", 1, false));
    }
    if (name == "f_alpha") {
      allow({"a", "x0"});
      return TestFunction::f_alpha(get(named, "a", 0, true), getv("x0"));
    }
    if (name == "bump") {
      allow({"r", "c"});
      return TestFunction::bump(getv("c"), get(named, "r", 1, false));
    }
    if (name == "rho_tilde" || name == "phi") {
      if (!dom_) error(name + " needs a domain");
      if (name == "phi") {
        allow({"j"});
        return TestFunction::partition(static_cast<int>(get(named, "j", 0, true)), *dom_);
      }
      allow({"b"});
      return TestFunction::rho_tilde(get(named, "b", 0, true), *dom_);
    }
    error("unknown function '" + name + "'");
  }
};

}  // namespace

TestFunction parse_function(const std::string& text, const DomainSpec* dom) { return Parser(text, dom).parse(); }

}  // namespace kondratiev
