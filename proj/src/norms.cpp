#include "kondratiev/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kondratiev/errors.hpp"
#include "kondratiev/geometry.hpp"

namespace kondratiev {

void QuadSpec::validate() const {
  if (radial_panels < 1) fail(ErrorCode::InvalidParams, "radialPanels must be >= 1");
  if (angular_order != 15 && angular_order != 21 && angular_order != 31 && angular_order != 41 &&
      angular_order != 51 && angular_order != 61)
    fail(ErrorCode::InvalidParams, "angularOrder must be one of 15, 21, 31, 41, 51, 61");
  if (j_max < 8) fail(ErrorCode::InvalidParams, "jMax must be >= 8");
  if (j_max > 200) fail(ErrorCode::InvalidParams, "jMax must be <= 200");
  if (!(target_rel_error > 0 && target_rel_error <= 1e-4))
    fail(ErrorCode::InvalidParams, "targetRelError must lie in (0, 1e-4]");
  if (max_refine < 0 || max_refine > 4) fail(ErrorCode::InvalidParams, "maxRefine must lie in [0, 4]");
}

QuadSpec QuadSpec::profile(const std::string& name) {
  QuadSpec q;
  if (name == "default") return q;
  if (name == "fast") {
    q.radial_panels = 1;
    q.angular_order = 15;
    q.j_max = 32;
    q.target_rel_error = 1e-4;
    q.max_refine = 1;
    return q;
  }
  if (name == "accurate") {
    q.radial_panels = 2;
    q.angular_order = 21;
    q.j_max = 48;
    q.target_rel_error = 1e-8;
    q.max_refine = 2;
    return q;
  }
  fail(ErrorCode::InvalidParams, "unknown quadrature profile '" + name + "' (fast, default, accurate)");
}

QuadSpec QuadSpec::from_env() {
  const char* v = std::getenv(kQuadProfileEnv);
  return profile(v && *v ? v : "default");
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Convergent: return "Convergent";
    case Membership::Divergent: return "Divergent";
    case Membership::Borderline: return "Borderline";
  }
  return "?";
}

std::optional<double> tail_slope(const std::vector<double>& s, int window) {
  const int n = static_cast<int>(s.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = std::max(0, n - window); i < n; ++i) {
    if (!(s[i] > 0)) continue;
    double x = i, y = std::log2(s[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) return std::nullopt;
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

Membership classify_slope(std::optional<double> slope, bool p_infinite, double band) {
  if (!slope) return Membership::Convergent;
  if (p_infinite) return *slope < band ? Membership::Convergent : Membership::Divergent;
  if (*slope <= -band) return Membership::Convergent;
  if (*slope >= band) return Membership::Divergent;
  return Membership::Borderline;
}

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Gauss-Kronrod panels: the Kronrod rule is the value, the embedded Gauss rule the check

struct QNode {
  double x, wf, wc;
};

struct RefRule {
  std::vector<double> t, wf, wc;
};

template <unsigned N>
RefRule make_gk() {
  using GK = boost::math::quadrature::gauss_kronrod<double, N>;
  using G = boost::math::quadrature::gauss<double, (N - 1) / 2>;
  const auto& xa = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const bool odd = ((N - 1) / 2) & 1;
  RefRule r;
  for (unsigned i = 0; i < xa.size(); ++i) {
    bool gauss = odd ? i % 2 == 0 : i % 2 == 1;
    double g = gauss ? wg[i / 2] : 0.0;
    if (xa[i] == 0) {
      r.t.push_back(0);
      r.wf.push_back(wk[i]);
      r.wc.push_back(g);
      continue;
    }
    for (double sgn : {-1.0, 1.0}) {
      r.t.push_back(sgn * xa[i]);
      r.wf.push_back(wk[i]);
      r.wc.push_back(g);
    }
  }
  return r;
}

const RefRule& ref_rule(int N) {
  static const RefRule r15 = make_gk<15>(), r21 = make_gk<21>(), r31 = make_gk<31>(), r41 = make_gk<41>(),
                       r51 = make_gk<51>(), r61 = make_gk<61>();
  switch (N) {
    case 15: return r15;
    case 21: return r21;
    case 31: return r31;
    case 41: return r41;
    case 51: return r51;
    default: return r61;
  }
}

void append_rule(std::vector<QNode>& out, double a, double b, int panels, int N) {
  if (!(b > a)) return;
  const RefRule& R = ref_rule(N);
  for (int i = 0; i < panels; ++i) {
    double lo = a + (b - a) * i / panels, hi = i + 1 == panels ? b : a + (b - a) * (i + 1) / panels;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (size_t k = 0; k < R.t.size(); ++k) out.push_back({mid + half * R.t[k], half * R.wf[k], half * R.wc[k]});
  }
}

// periodic trapezoid on [t0, t0 + 2 pi) with M points; the even points form the check rule
std::vector<QNode> periodic_rule(double t0, int M) {
  std::vector<QNode> v;
  const double h = 2 * std::numbers::pi / M;
  for (int i = 0; i < M; ++i) v.push_back({t0 + i * h, h, i % 2 == 0 ? 2 * h : 0.0});
  return v;
}

std::vector<QNode> rule(double a, double b, int panels, int N) {
  std::vector<QNode> v;
  append_rule(v, a, b, panels, N);
  return v;
}

// ---------------------------------------------------------------------------
// integrand: sum over |alpha| = k of |rho^{k-a} d^alpha u|^p, split by k

class Integrand {
 public:
  Integrand(const TestFunction& tf, const SpaceParams& sp, int d)
      : tf_(tf), d_(d), m_(sp.m), a_(to_double(sp.a)), pinf_(sp.p.is_infinite()),
        p_(pinf_ ? 0.0 : sp.p.to_double()), L_(&JetLayout::get(d, sp.m)) {
    for (int i = 0; i < L_->size; ++i) terms_.push_back({i, L_->factorial[i], L_->degree[i]});
  }

  int m() const { return m_; }
  bool pinf() const { return pinf_; }

  // out[k] receives the weighted order-k term (finite p) or its max (p = inf)
  void eval(const double* x, double rho, double* out) const {
    Jet X[kMaxJetVars] = {Jet(*L_), Jet(*L_), Jet(*L_)};
    for (int i = 0; i < d_; ++i) X[i] = Jet::variable(*L_, i, x[i]);
    Jet J = tf_.eval(X, d_);
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (const auto& t : terms_) {
      double v = std::abs(J.coeff(t.idx) * t.fact);
      if (pinf_)
        acc[t.k] = std::max(acc[t.k], v);
      else
        acc[t.k] += p_ == 2 ? v * v : p_ == 1 ? v : std::pow(v, p_);
    }
    for (int k = 0; k <= m_; ++k) {
      if (acc[k] == 0) {
        out[k] = 0;
        continue;
      }
      out[k] = pinf_ ? acc[k] * std::pow(rho, k - a_) : acc[k] * std::pow(rho, (k - a_) * p_);
    }
  }

 private:
  struct Term {
    int idx;
    double fact;
    int k;
  };
  const TestFunction& tf_;
  int d_, m_;
  double a_;
  bool pinf_;
  double p_;
  const JetLayout* L_;
  std::vector<Term> terms_;
};

struct ShellAcc {
  std::vector<double> fine, coarse;
  explicit ShellAcc(int m = 0) : fine(m + 1, 0.0), coarse(m + 1, 0.0) {}
  double sum_fine() const {
    double s = 0;
    for (double v : fine) s += v;
    return s;
  }
  double err() const {
    double s = 0;
    for (size_t k = 0; k < fine.size(); ++k) s += fine[k] - coarse[k];
    return std::abs(s);
  }
};

void add_point(ShellAcc& acc, const Integrand& f, const Support& sup, const double* x, double rho, double jac,
               double wf, double wc) {
  if (sup.excludes(std::span<const double>(x, sup.d))) return;
  double v[8];
  f.eval(x, rho, v);
  for (int k = 0; k <= f.m(); ++k) {
    if (f.pinf()) {
      acc.fine[k] = std::max(acc.fine[k], v[k]);
      acc.coarse[k] = acc.fine[k];
    } else {
      acc.fine[k] += wf * jac * v[k];
      acc.coarse[k] += wc * jac * v[k];
    }
  }
}

// ---------------------------------------------------------------------------
// radial range of the support in the x' coordinates (first k)

struct RRange {
  double lo = 0, hi = std::numeric_limits<double>::infinity();
};

RRange support_radius(const Support& s, int k) {
  RRange r;
  double hi2 = 0, lo2 = 0;
  for (int i = 0; i < k; ++i) {
    hi2 += std::max(s.lo[i] * s.lo[i], s.hi[i] * s.hi[i]);
    double g = s.lo[i] > 0 ? s.lo[i] : s.hi[i] < 0 ? -s.hi[i] : 0.0;
    lo2 += g * g;
  }
  r.hi = std::sqrt(hi2);
  r.lo = std::sqrt(lo2);
  for (const auto& b : s.balls) {
    double c2 = 0;
    for (int i = 0; i < k; ++i) c2 += b.center[i] * b.center[i];
    double c = std::sqrt(c2);
    r.hi = std::min(r.hi, c + b.radius);
    r.lo = std::max(r.lo, c - b.radius);
  }
  // the rho window is on min(1, dist)
  r.lo = std::max(r.lo, s.rho_lo);
  if (s.rho_hi < 1) r.hi = std::min(r.hi, s.rho_hi);
  return r;
}

// ---------------------------------------------------------------------------
// angular node sets: unit vectors in R^k with weights

struct Ang {
  double w[3];
  double wf, wc;
};

void circle_nodes(std::vector<Ang>& out, double t0, double t1, int panels, int N, double c = 1.0, double s0 = 0.0) {
  for (const auto& q : rule(t0, t1, panels, N)) out.push_back({{std::cos(q.x) * c, std::sin(q.x) * c, s0}, q.wf, q.wc});
}

// angle nodes on a full turn: periodic trapezoid, or panels cut at the axes when
// |d^alpha u|^p may have kinks there (p not an even integer)
std::vector<QNode> turn_rule(int mult, int N, bool split) {
  if (!split) return periodic_rule(0.0, (N + 1) * mult);
  std::vector<QNode> v;
  for (int q = 0; q < 4; ++q) append_rule(v, q * kPi / 2, (q + 1) * kPi / 2, mult, N);
  return v;
}

std::vector<Ang> full_circle(int mult, int N, bool split) {
  std::vector<Ang> v;
  for (const auto& q : turn_rule(mult, N, split)) v.push_back({{std::cos(q.x), std::sin(q.x), 0}, q.wf, q.wc});
  return v;
}

// cap {angle(w, axis) < delta} on S^2 in coordinates t = cos(angle), phi
std::vector<Ang> sphere_cap(const double axis[3], double tmin, int mult, int N, bool split) {
  // orthonormal frame around axis
  double e1[3], e2[3];
  double ax = std::abs(axis[0]), ay = std::abs(axis[1]), az = std::abs(axis[2]);
  double h[3] = {0, 0, 0};
  h[ax <= ay && ax <= az ? 0 : ay <= az ? 1 : 2] = 1;
  e1[0] = h[1] * axis[2] - h[2] * axis[1];
  e1[1] = h[2] * axis[0] - h[0] * axis[2];
  e1[2] = h[0] * axis[1] - h[1] * axis[0];
  double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& v : e1) v /= n1;
  e2[0] = axis[1] * e1[2] - axis[2] * e1[1];
  e2[1] = axis[2] * e1[0] - axis[0] * e1[2];
  e2[2] = axis[0] * e1[1] - axis[1] * e1[0];
  std::vector<QNode> ts;
  if (tmin < 0 && split) {
    append_rule(ts, tmin, 0.0, mult, N);
    append_rule(ts, 0.0, 1.0, mult, N);
  } else {
    append_rule(ts, tmin, 1.0, mult, N);
  }
  std::vector<QNode> ph = turn_rule(mult, N, split);
  std::vector<Ang> v;
  for (const auto& t : ts) {
    double st = std::sqrt(std::max(0.0, 1 - t.x * t.x));
    for (const auto& p : ph) {
      double c = std::cos(p.x) * st, s = std::sin(p.x) * st;
      v.push_back({{t.x * axis[0] + c * e1[0] + s * e2[0], t.x * axis[1] + c * e1[1] + s * e2[1],
                    t.x * axis[2] + c * e1[2] + s * e2[2]},
                   t.wf * p.wf,
                   t.wc * p.wc});
    }
  }
  return v;
}

// Narrowest angular window implied by the support balls: axis and half-angle.
struct Window {
  bool any = false;
  double axis[3] = {0, 0, 0};
  double half = kPi;
};

Window ball_window(const Support& s, int k) {
  Window w;
  for (const auto& b : s.balls) {
    double c2 = 0;
    for (int i = 0; i < k; ++i) c2 += b.center[i] * b.center[i];
    double c = std::sqrt(c2);
    if (!(c > b.radius)) continue;
    double h = std::asin(b.radius / c);
    if (h < w.half) {
      w.any = true;
      w.half = h;
      for (int i = 0; i < k; ++i) w.axis[i] = b.center[i] / c;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// chart description for the tensor domains: x = (r w, x''), jacobian r^{k-1}

struct Chart {
  int k = 1;  // dimension of the polar block
  int l = 0;  // trailing coordinates
  double r_max = 0;
  // angular nodes for a given radius, panel multiplier
  std::function<std::vector<Ang>(double r, int mult, int N)> angles;
  // interval of trailing coordinate i for a given radius
  std::function<std::pair<double, double>(int i, double r)> trailing;
  // panel breaks along trailing coordinates (kinks of |d^alpha u|^p for symmetric factors)
  std::vector<double> cuts[2];
};

std::vector<QNode> cut_rule(double a, double b, const std::vector<double>& cuts, int mult, int N) {
  std::vector<QNode> v;
  double lo = a;
  for (double t : cuts)
    if (t > lo && t < b) {
      append_rule(v, lo, t, mult, N);
      lo = t;
    }
  append_rule(v, lo, b, mult, N);
  return v;
}

Chart make_chart(const DomainSpec& dom, const Support& sup, bool split) {
  Chart c;
  const int d = dom.d;
  switch (dom.kind) {
    case DomainKind::ModelCase: {
      c.k = d - dom.l;
      c.l = dom.l;
      c.r_max = std::numeric_limits<double>::infinity();
      Window w = ball_window(sup, c.k);
      bool pos = sup.hi[0] > 0, neg = sup.lo[0] < 0;
      c.angles = [=](double, int mult, int N) {
        std::vector<Ang> v;
        if (c.k == 1) {
          if (pos) v.push_back({{1, 0, 0}, 1, 1});
          if (neg) v.push_back({{-1, 0, 0}, 1, 1});
        } else if (c.k == 2) {
          if (w.any) {
            double th = std::atan2(w.axis[1], w.axis[0]);
            circle_nodes(v, th - w.half, th, mult, N);
            circle_nodes(v, th, th + w.half, mult, N);
          } else {
            v = full_circle(mult, N, split);
          }
        } else {
          double z[3] = {0, 0, 1};
          v = w.any ? sphere_cap(w.axis, std::cos(w.half), mult, N, false) : sphere_cap(z, -1.0, mult, N, split);
        }
        return v;
      };
      c.trailing = [&sup, k = c.k](int i, double) { return std::pair{sup.lo[k + i], sup.hi[k + i]}; };
      break;
    }
    case DomainKind::SmoothCone: {
      c.k = d;
      c.r_max = 1;
      const double g = dom.gamma;
      // a support ball seen inside the cone narrows the angular range
      Window w = ball_window(sup, d);
      const double off = d == 2 ? std::atan2(w.axis[0], w.axis[1]) : std::acos(std::clamp(w.axis[2], -1.0, 1.0));
      const bool narrow = w.any && std::abs(off) + w.half <= g;
      c.angles = [=](double, int mult, int N) {
        std::vector<Ang> v;
        if (narrow && d == 2) {
          for (double a : {off - w.half, off})
            for (const auto& q : rule(a, a + w.half, mult, N)) v.push_back({{std::sin(q.x), std::cos(q.x), 0}, q.wf, q.wc});
        } else if (narrow) {
          v = sphere_cap(w.axis, std::cos(w.half), mult, N, false);
        } else if (d == 2) {
          // w = (sin t, cos t), t in (-g, g); split where a coordinate changes sign
          std::vector<double> cuts{-g};
          if (split)
            for (double t : {-kPi / 2, 0.0, kPi / 2})
              if (t > -g && t < g) cuts.push_back(t);
          cuts.push_back(g);
          for (size_t i = 0; i + 1 < cuts.size(); ++i)
            for (const auto& q : rule(cuts[i], cuts[i + 1], mult, N))
              v.push_back({{std::sin(q.x), std::cos(q.x), 0}, q.wf, q.wc});
        } else {
          double z[3] = {0, 0, 1};
          v = sphere_cap(z, std::cos(g), mult, N, split);
        }
        return v;
      };
      break;
    }
    case DomainKind::NonsmoothCone:
    case DomainKind::DihedralCube: {
      const bool cone = dom.kind == DomainKind::NonsmoothCone;
      c.k = cone ? d - 1 : d - dom.l;
      c.l = d - c.k;
      const double cot = cone && dom.gamma < kPi / 2 ? 1.0 / std::tan(dom.gamma) : 0.0;
      c.r_max = std::sqrt(static_cast<double>(c.k));
      if (cot > 0) c.r_max = std::min(c.r_max, 1.0 / cot);
      c.angles = [=](double r, int mult, int N) {
        std::vector<Ang> v;
        if (c.k == 1) {
          v.push_back({{1, 0, 0}, 1, 1});
        } else {
          // quarter circle cut by the unit square
          double t0 = 0, t1 = kPi / 2;
          if (r > 1) {
            t0 = std::acos(1 / r);
            t1 = std::asin(1 / r);
          }
          circle_nodes(v, t0, t1, mult, N);
        }
        return v;
      };
      c.trailing = [&sup, cone, cot, k = c.k, d](int i, double r) {
        double lo = 0, hi = 1;
        if (cone && k + i == d - 1) lo = r * cot;
        return std::pair{std::max(lo, sup.lo[k + i]), std::min(hi, sup.hi[k + i])};
      };
      break;
    }
    case DomainKind::PolyhedralCone: break;
  }
  if (split)
    for (int i = 0; i < c.l && i < 2; ++i) {
      auto& v = c.cuts[i];
      if (dom.kind == DomainKind::ModelCase) v.push_back(0.0);
      for (const auto& b : sup.balls) v.push_back(b.center[c.k + i]);
      std::sort(v.begin(), v.end());
    }
  return c;
}

// ---------------------------------------------------------------------------

struct Pass {
  int j1 = 0, j_max = 0;
  bool binned = false;  // points sorted into shells by weight: only the total has a smooth integrand
  std::vector<ShellAcc> acc;
};

void integrate_chart(const Chart& c, const Integrand& f, const Support& sup, const QuadSpec& quad, Pass& out) {
  RRange rr = support_radius(sup, c.k);
  rr.hi = std::min(rr.hi, c.r_max);
  if (!std::isfinite(rr.hi)) fail(ErrorCode::UnboundedSupport, "function support is unbounded in the radial direction");
  for (int i = 0; i < c.l; ++i) {
    auto [lo, hi] = c.trailing(i, 0.5);
    if (!std::isfinite(lo) || !std::isfinite(hi))
      fail(ErrorCode::UnboundedSupport, "function support is unbounded along the singular set");
  }
  const int m = f.m();
  for (int j = out.j1; j <= out.j_max; ++j) {
    double lo = std::ldexp(1.0, -j - 1), hi = j == out.j1 ? rr.hi : std::ldexp(1.0, -j);
    lo = std::max(lo, rr.lo);
    hi = std::min(hi, rr.hi);
    ShellAcc best(m);
    if (!(hi > lo)) {
      out.acc.push_back(best);
      continue;
    }
    int N = quad.angular_order, mult = 1;
    for (int level = 0; level <= (f.pinf() ? 0 : quad.max_refine); ++level) {
      if (level > 0) {
        // raise the order first, then split panels
        if (N < 61)
          N = N < 31 ? 31 : 61;
        else
          mult *= 2;
      }
      std::vector<QNode> rn;
      if (hi <= 1 || lo >= 1) {
        // cap region: dyadic pieces above 1
        if (lo >= 1) {
          for (double a = lo; a < hi; a *= 2) append_rule(rn, a, std::min(2 * a, hi), quad.radial_panels * mult, N);
        } else {
          append_rule(rn, lo, hi, quad.radial_panels * mult, N);
        }
      } else {
        append_rule(rn, lo, 1.0, quad.radial_panels * mult, N);
        for (double a = 1.0; a < hi; a *= 2) append_rule(rn, a, std::min(2 * a, hi), quad.radial_panels * mult, N);
      }
      ShellAcc acc(m);
      std::vector<Ang> fixed;
      bool r_indep = c.k < 2 || (c.r_max <= 1) || hi <= 1;
      if (r_indep) fixed = c.angles(lo, mult, N);
      double x[3] = {0, 0, 0};
      for (const auto& r : rn) {
        const std::vector<Ang>& ang = r_indep ? fixed : (fixed = c.angles(r.x, mult, N));
        const double rho = std::min(1.0, r.x);
        const double jr = c.k == 1 ? 1.0 : c.k == 2 ? r.x : r.x * r.x;
        // trailing nodes
        std::vector<QNode> t0{{0, 1, 1}}, t1{{0, 1, 1}};
        if (c.l >= 1) {
          auto [a, b] = c.trailing(0, r.x);
          if (!(b > a)) continue;
          t0 = cut_rule(a, b, c.cuts[0], mult, N);
        }
        if (c.l >= 2) {
          auto [a, b] = c.trailing(1, r.x);
          if (!(b > a)) continue;
          t1 = cut_rule(a, b, c.cuts[1], mult, N);
        }
        for (const auto& w : ang) {
          for (int i = 0; i < c.k; ++i) x[i] = r.x * w.w[i];
          for (const auto& u : t0) {
            if (c.l >= 1) x[c.k] = u.x;
            for (const auto& v : t1) {
              if (c.l >= 2) x[c.k + 1] = v.x;
              add_point(acc, f, sup, x, rho, jr, r.wf * w.wf * u.wf * v.wf, r.wc * w.wc * u.wc * v.wc);
            }
          }
        }
      }
      // the previous level is a second reference; keep whichever check is tighter
      if (level > 0) {
        ShellAcc alt = acc;
        alt.coarse = best.fine;
        if (alt.err() < acc.err()) acc = alt;
      }
      best = acc;
      const double s = acc.sum_fine();
      if (f.pinf() || s == 0 || acc.err() <= quad.target_rel_error * s) break;
    }
    out.acc.push_back(best);
  }
}

// Polyhedral cone: x = x3 (y, 1) with y in the polygon split into triangles that each
// touch one corner; dyadic panels in x3 and in the distance to the corner, points binned
// into shells by their weight.
void integrate_polyhedral(const DomainSpec& dom, const Integrand& f, const Support& sup, const QuadSpec& quad,
                          Pass& out) {
  const int N = quad.angular_order;
  const int m = f.m();
  const int nsh = out.j_max - out.j1 + 1;
  out.acc.assign(nsh, ShellAcc(m));
  const auto& P = dom.edges;
  const int n = static_cast<int>(P.size());
  Vertex2 C{0, 0};
  for (const auto& v : P) {
    C[0] += v[0] / n;
    C[1] += v[1] / n;
  }
  struct Tri {
    Vertex2 V, A, B;
  };
  std::vector<Tri> tris;
  for (int k = 0; k < n; ++k) {
    const auto& V = P[k];
    const auto& Vn = P[(k + 1) % n];
    const auto& Vp = P[(k + n - 1) % n];
    Vertex2 Mn{(V[0] + Vn[0]) / 2, (V[1] + Vn[1]) / 2}, Mp{(V[0] + Vp[0]) / 2, (V[1] + Vp[1]) / 2};
    tris.push_back({V, Mn, C});
    tris.push_back({V, C, Mp});
  }
  const double floor_w = std::ldexp(1.0, -out.j_max - 1);
  const double x3_hi = std::min(1.0, sup.hi[2]), x3_lo = std::max(0.0, sup.lo[2]);
  auto ref = rule(0.0, 1.0, 1, N);
  for (const auto& T : tris) {
    double ax = T.A[0] - T.V[0], ay = T.A[1] - T.V[1], bx = T.B[0] - T.A[0], by = T.B[1] - T.A[1];
    double det = std::abs(ax * by - ay * bx);
    double L = std::max(std::hypot(ax, ay), std::hypot(T.B[0] - T.V[0], T.B[1] - T.V[1]));
    for (int i = 0;; ++i) {
      double z1 = std::ldexp(1.0, -i), z0 = std::ldexp(1.0, -i - 1);
      if (z1 * L * std::sqrt(2.0) < floor_w) break;
      if (z0 >= x3_hi || z1 <= x3_lo) continue;
      auto zn = rule(z0, z1, 1, N);
      for (int l = 0;; ++l) {
        double s1 = std::ldexp(1.0, -l), s0 = std::ldexp(1.0, -l - 1);
        // dist(x, M) <= x3 |y - V| * |(V,1)|-ish; generous bound
        if (z1 * s1 * L * std::sqrt(2.0) < floor_w) break;
        auto sn = rule(s0, s1, 1, N);
        for (const auto& z : zn)
          for (const auto& s : sn)
            for (const auto& w : ref) {
              double y0 = T.V[0] + s.x * (ax + w.x * bx), y1 = T.V[1] + s.x * (ay + w.x * by);
              double x[3] = {z.x * y0, z.x * y1, z.x};
              double dist = distance_to_singular_set(dom, x);
              if (dist < floor_w) continue;
              double rho = std::min(1.0, dist);
              // disjoint bins: j1 takes rho > 2^{-j1-1}, j takes (2^{-j-1}, 2^{-j}]
              int e = 0;
              double fr = std::frexp(rho, &e);
              int j = std::max(fr == 0.5 ? 1 - e : -e, out.j1);
              if (j > out.j_max) continue;
              double jac = z.x * z.x * s.x * det;
              add_point(out.acc[j - out.j1], f, sup, x, rho, jac, z.wf * s.wf * w.wf, z.wc * s.wc * w.wc);
            }
      }
    }
  }
}

bool disjoint(const Support& a, const Support& b) {
  for (int i = 0; i < a.d; ++i)
    if (!(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])) return true;
  for (const auto& x : a.balls)
    for (const auto& y : b.balls) {
      double s = 0;
      for (int i = 0; i < a.d; ++i) s += (x.center[i] - y.center[i]) * (x.center[i] - y.center[i]);
      if (std::sqrt(s) >= x.radius + y.radius) return true;
    }
  return false;
}

Pass run_single(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom, const QuadSpec& quad);

// Summands with pairwise disjoint supports: |d^a sum u_i|^p = sum |d^a u_i|^p pointwise, so each
// term is integrated with its own (tight) support.
Pass run_pass(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom, const QuadSpec& quad) {
  auto parts = tf.summands();
  bool split = parts.size() > 1;
  std::vector<Support> sups;
  for (const auto& u : parts) sups.push_back(u.support(dom.d));
  for (size_t i = 0; split && i < parts.size(); ++i)
    for (size_t k = i + 1; split && k < parts.size(); ++k) split = disjoint(sups[i], sups[k]);
  if (!split) return run_single(tf, sp, dom, quad);
  Pass out = run_single(parts[0], sp, dom, quad);
  for (size_t i = 1; i < parts.size(); ++i) {
    Pass q = run_single(parts[i], sp, dom, quad);
    for (size_t s = 0; s < out.acc.size(); ++s)
      for (size_t k = 0; k < out.acc[s].fine.size(); ++k) {
        if (sp.p.is_infinite()) {
          out.acc[s].fine[k] = std::max(out.acc[s].fine[k], q.acc[s].fine[k]);
          out.acc[s].coarse[k] = std::max(out.acc[s].coarse[k], q.acc[s].coarse[k]);
        } else {
          out.acc[s].fine[k] += q.acc[s].fine[k];
          out.acc[s].coarse[k] += q.acc[s].coarse[k];
        }
      }
  }
  return out;
}

Pass run_single(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom, const QuadSpec& quad) {
  sp.validate();
  dom.validate();
  quad.validate();
  if (dom.d > 3) fail(ErrorCode::InvalidParams, "norms are implemented for d <= 3");
  if (sp.m > tf.max_order())
    fail(ErrorCode::OrderExceeded, "m = " + std::to_string(sp.m) + " exceeds the function's maximal order " +
                                       std::to_string(tf.max_order()));
  if (sp.m > 7) fail(ErrorCode::OrderExceeded, "norms support m <= 7");
  Integrand f(tf, sp, dom.d);
  Support sup = tf.support(dom.d);
  Pass out;
  out.j1 = start_indices(dom).j1;
  out.j_max = quad.j_max;
  if (sup.empty()) {
    out.acc.assign(out.j_max - out.j1 + 1, ShellAcc(sp.m));
    return out;
  }
  if (dom.kind == DomainKind::PolyhedralCone) {
    integrate_polyhedral(dom, f, sup, quad, out);
    out.binned = true;
  } else {
    const double p = sp.p.is_infinite() ? 0.0 : sp.p.to_double();
    const bool split = !(p > 0 && p == std::floor(p) && static_cast<long>(p) % 2 == 0);
    Chart c = make_chart(dom, sup, split);
    integrate_chart(c, f, sup, quad, out);
  }
  return out;
}

NormResult finish(const Pass& pass, const SpaceParams& sp, const std::vector<int>& orders, const NormResult* full) {
  NormResult r;
  const bool pinf = sp.p.is_infinite();
  const double p = pinf ? 0 : sp.p.to_double();
  ShellSeries& S = r.series;
  S.j1 = pass.j1;
  S.j_max = pass.j_max;
  double err = 0;
  for (const auto& a : pass.acc) {
    double s = 0, e = 0;
    std::vector<double> byk(a.fine.size(), 0.0);
    for (int k : orders) {
      byk[k] = a.fine[k];
      s = pinf ? std::max(s, a.fine[k]) : s + a.fine[k];
      e += a.fine[k] - a.coarse[k];
    }
    S.s.push_back(s);
    S.order.push_back(byk);
    S.err.push_back(pinf ? 0.0 : std::abs(e));
    S.total = pinf ? std::max(S.total, s) : S.total + s;
    err += pinf ? 0.0 : pass.binned ? e : std::abs(e);
  }
  S.tail_slope = tail_slope(S.s);
  S.converged = classify_slope(S.tail_slope, pinf) == Membership::Convergent;
  if (pinf) {
    r.lower_bound = true;
    r.value = S.converged ? S.total : std::numeric_limits<double>::infinity();
    return r;
  }
  if (S.converged && S.tail_slope) {
    double slope = *S.tail_slope;
    if (full && full->series.converged && full->series.tail_slope) slope = *full->series.tail_slope;
    double q = std::exp2(slope);
    S.tail = S.s.back() * q / (1 - q);
  }
  r.est_rel_error = S.total > 0 ? std::abs(err) / S.total : 0.0;
  r.value = S.converged ? std::pow(S.total + S.tail, 1.0 / p) : std::numeric_limits<double>::infinity();
  return r;
}

void check_error(const NormResult& r, const QuadSpec& quad) {
  if (r.series.converged && r.est_rel_error > 10 * quad.target_rel_error)
    fail(ErrorCode::QuadratureFailure, "estimated relative error " + std::to_string(r.est_rel_error) +
                                           " exceeds 10 x targetRelError; refine the quadrature");
}

NormPair pair_of(const Pass& pass, const SpaceParams& sp) {
  std::vector<int> all, ext{0};
  for (int k = 0; k <= sp.m; ++k) all.push_back(k);
  if (sp.m > 0) ext.push_back(sp.m);
  NormPair np;
  np.full = finish(pass, sp, all, nullptr);
  np.extremal = finish(pass, sp, ext, &np.full);
  return np;
}

}  // namespace

NormPair norm_pair(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom, const QuadSpec& quad,
                   bool check) {
  NormPair np = pair_of(run_pass(tf, sp, dom, quad), sp);
  if (check) check_error(np.full, quad);
  return np;
}

NormResult kondratiev_norm(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                           const QuadSpec& quad) {
  return norm_pair(tf, sp, dom, quad).full;
}

NormResult extremal_norm(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                         const QuadSpec& quad) {
  NormPair np = pair_of(run_pass(tf, sp, dom, quad), sp);
  check_error(np.extremal, quad);
  return np.extremal;
}

QuadSpec detection_quad(const QuadSpec& quad) {
  QuadSpec q = quad;
  q.max_refine = 0;
  q.target_rel_error = std::max(q.target_rel_error, 1e-4);
  return q;
}

Membership membership_detect(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                             const QuadSpec& quad) {
  if (quad.j_max < 30) fail(ErrorCode::InvalidParams, "membership detection needs jMax >= 30");
  NormPair np = pair_of(run_pass(tf, sp, dom, detection_quad(quad)), sp);
  return classify_slope(np.full.series.tail_slope, sp.p.is_infinite());
}

}  // namespace kondratiev
