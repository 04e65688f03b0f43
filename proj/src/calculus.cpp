#include "kondratiev/calculus.hpp"

#include <sstream>

#include "kondratiev/errors.hpp"

namespace kondratiev {

namespace {

std::string q(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return to_string(r);
}

const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "==";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
    case Cmp::IsInteger: return "is an integer";
  }
  return "?";
}

// Collects hypotheses and tracks whether all of them hold.
struct Check {
  std::vector<Hypothesis> hs;
  bool ok = true;

  Check& req(std::string lt, Rational lv, Cmp c, std::string rt, Rational rv) {
    hs.push_back({std::move(lt), std::move(lv), c, std::move(rt), std::move(rv)});
    ok = ok && hs.back().holds();
    return *this;
  }
  Check& integer(std::string lt, Rational lv) {
    hs.push_back({std::move(lt), std::move(lv), Cmp::IsInteger, "", Rational(0)});
    ok = ok && hs.back().holds();
    return *this;
  }
  std::string reason() const {
    std::string s;
    for (const auto& h : hs) {
      if (!s.empty()) s += "; ";
      s += h.str();
    }
    return s;
  }
  // first violated hypothesis, for Fails reasons
  std::string violated() const {
    for (const auto& h : hs)
      if (!h.holds()) return "violated: " + h.str();
    return reason();
  }
};

Verdict make(Outcome o, std::string rule, std::string cite, std::string reason) {
  Verdict v;
  v.outcome = o;
  v.rule = std::move(rule);
  v.citation = std::move(cite);
  v.reason = std::move(reason);
  return v;
}

Rational Q(long long v) { return Rational(v); }

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "Holds";
    case Outcome::Fails: return "Fails";
    case Outcome::Undetermined: return "Undetermined";
  }
  return "?";
}

bool Hypothesis::holds() const {
  switch (cmp) {
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ge: return lhs >= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::IsInteger: return is_integer(lhs);
  }
  return false;
}

std::string Hypothesis::str() const {
  std::string s = lhs_text + " = " + q(lhs) + " " + cmp_text(cmp);
  if (cmp != Cmp::IsInteger) s += " " + rhs_text + " = " + q(rhs);
  return s;
}

bool ProductEntry::reverify() const {
  for (const auto& h : hypotheses)
    if (!h.holds()) return false;
  return true;
}

void SpaceParams::validate() const {
  if (m < 0) fail(ErrorCode::InvalidParams, "smoothness m must be >= 0");
  if (!p.is_infinite() && p.value() < 1) fail(ErrorCode::InvalidParams, "integrability p must be >= 1 or inf");
}

SpaceParams parse_space(const std::string& text) {
  SpaceParams sp;
  bool seen_m = false, seen_a = false, seen_p = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InvalidParams, "expected key=value in '" + text + "'");
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    while (!k.empty() && k.front() == ' ') k.erase(k.begin());
    while (!k.empty() && k.back() == ' ') k.pop_back();
    if (k == "m") {
      Rational r = parse_rational(v);
      if (!is_integer(r)) fail(ErrorCode::InvalidParams, "m must be an integer");
      sp.m = numerator(r).convert_to<int>();
      seen_m = true;
    } else if (k == "a") {
      sp.a = parse_rational(v);
      seen_a = true;
    } else if (k == "p" || k == "q") {
      sp.p = Exponent::parse(v);
      seen_p = true;
    } else {
      fail(ErrorCode::InvalidParams, "unknown space key '" + k + "'");
    }
  }
  if (!seen_m || !seen_a || !seen_p) fail(ErrorCode::InvalidParams, "space needs m, a and p: '" + text + "'");
  sp.validate();
  return sp;
}

int membership_kappa(const DomainSpec& dom) {
  switch (dom.kind) {
    case DomainKind::SmoothCone: return dom.d;
    case DomainKind::NonsmoothCone: return dom.d - 1;
    case DomainKind::DihedralCube:
    case DomainKind::ModelCase: return dom.d - dom.l;
    case DomainKind::PolyhedralCone: return 2;
  }
  return dom.d;
}

Verdict embed_continuous(const SpaceParams& src, const SpaceParams& tgt, const DomainSpec& dom) {
  src.validate();
  tgt.validate();
  dom.validate();
  if (src.m < 1) fail(ErrorCode::InvalidParams, "source smoothness must be >= 1");
  const int d = dom.d;
  if (src.p.is_infinite())
    return make(Outcome::Undetermined, "Thm-3.3", "continuous embedding, 1 <= p <= q",
                "p = inf lies outside the embedding theorems");
  if (src.p > tgt.p)
    return make(Outcome::Undetermined, "Thm-3.3", "continuous embedding, 1 <= p <= q",
                "p = " + src.p.str() + " > q = " + tgt.p.str() + " lies outside the embedding theorems");
  const Rational dp = src.p.dim_ratio(d);
  Check c;
  if (!tgt.p.is_infinite()) {
    const Rational dq = tgt.p.dim_ratio(d);
    c.req("m-d/p", src.m - dp, Cmp::Ge, "m'-d/q", tgt.m - dq);
    c.req("a-d/p", src.a - dp, Cmp::Ge, "a'-d/q", tgt.a - dq);
    return make(c.ok ? Outcome::Holds : Outcome::Fails, "Thm-3.3",
                "continuous embedding, 1 <= p <= q < inf", c.ok ? c.reason() : c.violated());
  }
  if (src.p.value() > 1) {
    c.req("m-d/p", src.m - dp, Cmp::Gt, "m'", Q(tgt.m));
    c.req("a-d/p", src.a - dp, Cmp::Ge, "a'", tgt.a);
  } else {
    c.req("m-d", Q(src.m - d), Cmp::Ge, "m'", Q(tgt.m));
    c.req("a-d", src.a - d, Cmp::Ge, "a'", tgt.a);
  }
  return make(c.ok ? Outcome::Holds : Outcome::Fails, "Thm-3.4", "continuous embedding into q = inf",
              c.ok ? c.reason() : c.violated());
}

Verdict embed_compact(const SpaceParams& src, const SpaceParams& tgt, const DomainSpec& dom) {
  src.validate();
  tgt.validate();
  dom.validate();
  if (src.m < 1) fail(ErrorCode::InvalidParams, "source smoothness must be >= 1");
  const int d = dom.d;
  if (src.p.is_infinite())
    return make(Outcome::Undetermined, "Thm-4.1", "compact embedding, 1 <= p <= q",
                "p = inf lies outside the compactness theorem as implemented");
  if (src.p > tgt.p)
    return make(Outcome::Undetermined, "Thm-4.1", "compact embedding, 1 <= p <= q",
                "p = " + src.p.str() + " > q = " + tgt.p.str() + " lies outside the compactness theorem");
  const Rational dp = src.p.dim_ratio(d), dq = tgt.p.dim_ratio(d);
  Check c;
  c.req("m-d/p", src.m - dp, Cmp::Gt, "m'-d/q", tgt.m - dq);
  c.req("a-d/p", src.a - dp, Cmp::Gt, "a'-d/q", tgt.a - dq);
  return make(c.ok ? Outcome::Holds : Outcome::Fails, "Thm-4.1", "compact embedding, strict inequalities",
              c.ok ? c.reason() : c.violated());
}

namespace {

// The Sobolev-algebra condition on m alone: m > d/p (p > 1) or m >= d (p = 1).
void sobolev_algebra(Check& c, int m, const Exponent& p, int d) {
  if (p.value() > 1)
    c.req("m", Q(m), Cmp::Gt, "d/p", p.dim_ratio(d));
  else
    c.req("m", Q(m), Cmp::Ge, "d", Q(d));
}

}  // namespace

Verdict is_algebra(const SpaceParams& sp, const DomainSpec& dom) {
  sp.validate();
  dom.validate();
  if (sp.p.is_infinite()) fail(ErrorCode::InvalidParams, "algebra question needs p < inf");
  const int d = dom.d;
  Check c;
  c.req("a", sp.a, Cmp::Ge, "d/p", sp.p.dim_ratio(d));
  sobolev_algebra(c, sp.m, sp.p, d);
  const std::string why = c.ok ? c.reason() : c.violated();
  switch (dom.kind) {
    case DomainKind::ModelCase:
      if (c.ok) return make(Outcome::Holds, "Cor-5.2(i)", "algebra on the model case, sufficiency", why);
      if (dom.l == 0) return make(Outcome::Fails, "Cor-5.2(ii)", "algebra on R^d minus a point, necessity", why);
      return make(Outcome::Undetermined, "Cor-5.2(i)", "algebra on the model case, sufficiency",
                  why + "; necessity is not established for 0 < l");
    case DomainKind::SmoothCone:
      return make(c.ok ? Outcome::Holds : Outcome::Fails, "Cor-5.16", "algebra on smooth cones, iff", why);
    default:
      if (c.ok) return make(Outcome::Holds, "Thm-5.15", "algebra transferred to polyhedral-type domains", why);
      return make(Outcome::Undetermined, "Thm-5.15", "algebra transferred to polyhedral-type domains",
                  why + "; only sufficiency is available on this domain");
  }
}

namespace {

Target target(int m, Rational a, Exponent p, bool open = false) {
  Target t;
  t.space.m = m;
  t.space.a = std::move(a);
  t.space.p = std::move(p);
  t.a_open = open;
  return t;
}

void push(ProductResult& r, const Check& c, std::string rule, std::string cite, Target t,
          std::string side = "") {
  if (!c.ok) return;
  ProductEntry e;
  e.rule = std::move(rule);
  e.citation = std::move(cite);
  e.target = std::move(t);
  e.hypotheses = c.hs;
  e.side_condition = std::move(side);
  r.applicable.push_back(std::move(e));
}

int to_int(const Rational& r) { return numerator(r).convert_to<int>(); }

void choose_best(ProductResult& r, int d) {
  long best_score = -1;
  for (size_t i = 0; i < r.applicable.size(); ++i) {
    if (r.applicable[i].conditional()) continue;
    long score = 0;
    for (size_t j = 0; j < r.applicable.size(); ++j)
      if (i != j && !r.applicable[j].conditional() &&
          target_embeds(r.applicable[i].target, r.applicable[j].target, d))
        ++score;
    if (score > best_score) {
      best_score = score;
      r.best = i;
    }
  }
}

// Cor 5.14 with `first` the factor whose space is kept and `second` the smoother multiplier.
void multiplier_rule(ProductResult& r, const SpaceParams& first, const SpaceParams& second, int d,
                     const std::string& first_name, const std::string& second_name) {
  const Exponent& p = first.p;
  Rational n_r = std::min(Rational(second.m - first.m), floor(second.a - first.a));
  if (n_r < 1) return;
  const int n = to_int(n_r);
  Check c;
  c.req(first_name + ".m", Q(first.m), Cmp::Ge, "1", Q(1));
  c.req("n = min(" + second_name + ".m-" + first_name + ".m, floor(" + second_name + ".a-" + first_name + ".a))",
        Q(n), Cmp::Ge, "1", Q(1));
  if (p.value() > 1) {
    c.req("p", p.value(), Cmp::Gt, "max(1, d/n)", std::max(Rational(1), Rational(d, n)));
    c.req(first_name + ".a", first.a, Cmp::Ge, "d/p-n", p.dim_ratio(d) - n);
    push(r, c, "Cor-5.14(i)", "multiplication by K^{m+n}_{a+n,p} functions",
         target(first.m, first.a, p));
  } else {
    c.req("d", Q(d), Cmp::Le, "n", Q(n));
    c.req(first_name + ".a", first.a, Cmp::Ge, "d-n", Q(d - n));
    push(r, c, "Cor-5.14(ii)", "multiplication by K^{m+n}_{a+n,1} functions",
         target(first.m, first.a, p));
  }
}

}  // namespace

bool target_embeds(const Target& s, const Target& t, int d) {
  if (s.space.p.is_infinite() || t.space.p.is_infinite()) {
    if (!(s.space.p == t.space.p)) return false;
    if (s.space.m < t.space.m) return false;
    return s.a_open && !t.a_open ? s.space.a > t.space.a : s.space.a >= t.space.a;
  }
  if (t.space.p < s.space.p) return false;
  const Rational dp = s.space.p.dim_ratio(d), dq = t.space.p.dim_ratio(d);
  if (!(s.space.m - dp >= t.space.m - dq)) return false;
  const Rational lhs = s.space.a - dp, rhs = t.space.a - dq;
  return s.a_open && !t.a_open ? lhs > rhs : lhs >= rhs;
}

ProductResult product_target(const SpaceParams& u, const SpaceParams& v, const DomainSpec& dom) {
  u.validate();
  v.validate();
  dom.validate();
  const int d = dom.d;
  ProductResult r;

  if (!(u.p == v.p)) {
    // only the K^m_{0,inf} multiplier rule mixes integrabilities
    for (int k = 0; k < 2; ++k) {
      const SpaceParams& f = k == 0 ? u : v;
      const SpaceParams& g = k == 0 ? v : u;
      if (f.p.is_infinite() || !g.p.is_infinite()) continue;
      Check c;
      c.req(std::string(k == 0 ? "u" : "v") + ".m", Q(f.m), Cmp::Ge, "1", Q(1));
      c.req(std::string(k == 0 ? "v" : "u") + ".m", Q(g.m), Cmp::Ge, "m", Q(f.m));
      c.req(std::string(k == 0 ? "v" : "u") + ".a", g.a, Cmp::Ge, "0", Q(0));
      push(r, c, "Prop-5.12", "multiplier in K^m_{0,inf}", target(f.m, f.a, f.p),
           "multiplier estimate in the K^m_{0,inf} norm");
    }
    if (r.applicable.empty())
      fail(ErrorCode::MixedIntegrability,
           "u.p = " + u.p.str() + " differs from v.p = " + v.p.str() + " and no mixed rule applies");
    choose_best(r, d);
    return r;
  }

  const Exponent& p = u.p;
  if (p.is_infinite()) return r;
  const Rational dp = p.dim_ratio(d);
  const bool p_gt_1 = p.value() > 1;
  const int m0 = std::min(u.m, v.m);
  const Rational a0 = std::min(u.a, v.a);

  {  // Thm 5.1, u and v from the same space
    Check c;
    c.req("u.m", Q(u.m), Cmp::Eq, "v.m", Q(v.m));
    c.req("u.a", u.a, Cmp::Eq, "v.a", v.a);
    c.req("m", Q(u.m), Cmp::Ge, "1", Q(1));
    sobolev_algebra(c, u.m, p, d);
    push(r, c, "Thm-5.1", "product estimate, W^m_p an algebra", target(u.m, 2 * u.a - dp, p));
  }
  {  // Cor 5.3, maximal admissible m = min(m1, m2)
    Check c;
    c.req("min(u.m,v.m)", Q(m0), Cmp::Ge, "1", Q(1));
    sobolev_algebra(c, m0, p, d);
    push(r, c, "Cor-5.3", "product of different spaces, min(m1,m2) >= m > d/p",
         target(m0, u.a + v.a - dp, p));
  }
  if (p_gt_1) {
    {  // Thm 5.5
      Check c;
      c.req("m0 = min(u.m,v.m)", Q(m0), Cmp::Ge, "1", Q(1));
      c.req("m0", Q(m0), Cmp::Ge, "d/(2p)", dp / 2);
      c.req("m0", Q(m0), Cmp::Lt, "d/p", dp);
      const Rational m1 = floor(2 * m0 - dp);
      c.req("m1 = floor(2m0-d/p)", m1, Cmp::Ge, "0", Q(0));
      if (c.ok)
        push(r, c, "Thm-5.5", "product with unbounded factors, a1 = 2(a0 - d/(2p))",
             target(to_int(m1), 2 * a0 - dp, p));
    }
    {  // Prop 5.7
      Check c;
      c.req("u.m", Q(u.m), Cmp::Ge, "1", Q(1));
      c.req("v.m", Q(v.m), Cmp::Ge, "1", Q(1));
      c.req("u.m+v.m", Q(u.m + v.m), Cmp::Ge, "d/p", dp);
      c.req("u.m", Q(u.m), Cmp::Lt, "d/p", dp);
      c.req("v.m", Q(v.m), Cmp::Lt, "d/p", dp);
      const Rational m2 = floor(u.m + v.m - dp);
      c.req("m2 = floor(u.m+v.m-d/p)", m2, Cmp::Ge, "0", Q(0));
      if (c.ok)
        push(r, c, "Prop-5.7", "product with different smoothness, a2 = a0 + a1 - d/p",
             target(to_int(m2), u.a + v.a - dp, p));
    }
    {  // Thm 5.8
      Check c;
      c.req("m = min(u.m,v.m)", Q(m0), Cmp::Ge, "1", Q(1));
      c.req("m", Q(m0), Cmp::Gt, "2d(1/p-1/2)", 2 * d * (1 / p.value() - Rational(1, 2)));
      c.req("m", Q(m0), Cmp::Lt, "d/p", dp);
      if (c.ok) {
        const Rational t = Rational(d) / (2 * dp - m0);
        push(r, c, "Thm-5.8", "product into lower integrability t = d/(2d/p - m), a1 < 2a0 - m",
             target(m0, 2 * a0 - m0, Exponent(t), true));
      }
    }
    {  // Thm 5.10
      Check c;
      c.req("u.m", Q(u.m), Cmp::Eq, "v.m", Q(v.m));
      c.req("u.a", u.a, Cmp::Eq, "v.a", v.a);
      c.req("m", Q(u.m), Cmp::Ge, "1", Q(1));
      push(r, c, "Thm-5.10", "Moser-type estimate", target(u.m, u.a, p),
           "u and v bounded (L_inf norms enter the estimate)");
    }
  }
  multiplier_rule(r, u, v, d, "u", "v");
  multiplier_rule(r, v, u, d, "v", "u");
  choose_best(r, d);
  return r;
}

ProductResult power_target(const SpaceParams& sp, int n, const DomainSpec& dom) {
  sp.validate();
  dom.validate();
  if (n < 1) fail(ErrorCode::InvalidParams, "power n must be >= 1");
  const int d = dom.d;
  ProductResult r;
  if (n == 1) {
    Check c;
    c.req("n", Q(n), Cmp::Eq, "1", Q(1));
    push(r, c, "identity", "u^1 = u", target(sp.m, sp.a, sp.p));
    r.best = 0;
    return r;
  }
  const Exponent& p = sp.p;
  if (p.is_infinite()) return r;
  const Rational dp = p.dim_ratio(d);
  const bool p_gt_1 = p.value() > 1;
  {
    Check c;
    c.req("m", Q(sp.m), Cmp::Ge, "1", Q(1));
    sobolev_algebra(c, sp.m, p, d);
    push(r, c, "Cor-5.9(i)", "powers, u^n in K^m_{na-d(n-1)/p,p}",
         target(sp.m, n * sp.a - dp * (n - 1), p));
  }
  if (n == 2 && p_gt_1) {
    {
      Check c;
      c.req("m", Q(sp.m), Cmp::Ge, "1", Q(1));
      c.req("m", Q(sp.m), Cmp::Ge, "d/(2p)", dp / 2);
      c.req("m", Q(sp.m), Cmp::Lt, "d/p", dp);
      const Rational m1 = floor(2 * sp.m - dp);
      c.req("m1 = floor(2m-d/p)", m1, Cmp::Ge, "0", Q(0));
      if (c.ok) push(r, c, "Cor-5.9(ii)", "squares of unbounded functions", target(to_int(m1), 2 * sp.a - dp, p));
    }
    {
      Check c;
      c.req("m", Q(sp.m), Cmp::Ge, "1", Q(1));
      c.req("m", Q(sp.m), Cmp::Gt, "2d(1/p-1/2)", 2 * d * (1 / p.value() - Rational(1, 2)));
      c.req("m", Q(sp.m), Cmp::Lt, "d/p", dp);
      if (c.ok)
        push(r, c, "Cor-5.9(iii)", "squares into lower integrability t = d/(2d/p - m)",
             target(sp.m, 2 * sp.a - sp.m, Exponent(Rational(d) / (2 * dp - sp.m)), true));
    }
  }
  if (p_gt_1) {
    // induction through the different-smoothness product; sensible only for integer d/p
    Check c;
    c.integer("d/p", dp);
    c.req("d/p", dp, Cmp::Ge, "1", Q(1));
    c.req("d/p", dp, Cmp::Le, "d-1", Q(d - 1));
    c.req("m", Q(sp.m), Cmp::Ge, "1", Q(1));
    c.req("m", Q(sp.m), Cmp::Lt, "d/p", dp);
    c.req("(n-1)d/p", (n - 1) * dp, Cmp::Le, "nm", Q(n * sp.m));
    if (c.ok)
      push(r, c, "Cor-5.9-remark", "powers by induction when d/p is an integer",
           target(to_int(n * sp.m - (n - 1) * dp), n * sp.a - (n - 1) * dp, p));
  }
  choose_best(r, d);
  return r;
}

namespace {

Verdict membership(const Rational& a, const SpaceParams& sp, const DomainSpec& dom, std::string rule,
                   std::string cite) {
  const int kappa = membership_kappa(dom);
  Check c;
  if (sp.p.is_infinite())
    c.req("a", a, Cmp::Le, "0", Q(0));
  else
    c.req("a", a, Cmp::Lt, "kappa/p", Rational(kappa) / sp.p.value());
  std::string why = (c.ok ? c.reason() : c.violated()) + " (kappa = " + std::to_string(kappa) + ")";
  return make(c.ok ? Outcome::Holds : Outcome::Fails, std::move(rule), std::move(cite), why);
}

}  // namespace

Verdict member_constant(const SpaceParams& sp, const DomainSpec& dom) {
  sp.validate();
  dom.validate();
  if (dom.kind == DomainKind::ModelCase)
    fail(ErrorCode::InvalidParams, "membership of constants is not decided on the unbounded model case");
  return membership(sp.a, sp, dom, "Lemma-6.1", "membership of the constant function");
}

Verdict member_rho_power(const Rational& b, const SpaceParams& sp, const DomainSpec& dom) {
  sp.validate();
  dom.validate();
  const Rational a = sp.a - b;
  if (dom.kind == DomainKind::ModelCase)
    return membership(a, sp, dom, "Lemma-6.3", "membership of rho~^b psi on the model case");
  return membership(a, sp, dom, "Lemma-6.2", "membership of rho~^b");
}

}  // namespace kondratiev
