#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kondratiev/errors.hpp"
#include "kondratiev/geometry.hpp"
#include "kondratiev/norms.hpp"

using namespace kondratiev;

namespace {

SpaceParams space(int m, Rational a, Rational p) { return SpaceParams{m, std::move(a), Exponent(std::move(p))}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidParams;
}

}  // namespace

TEST_CASE("constant on the smooth cone against the radial closed form") {
  QuadSpec q;
  struct Case {
    int d;
    double g;
    Rational a, p;
  };
  for (const auto& c : {Case{2, 0.4, Rational(1, 2), 2}, Case{3, 0.9, Rational(1), 2}, Case{3, 2.3, Rational(-1, 3), 3},
                        Case{2, 1.6, Rational(3, 5), 1}, Case{3, 0.2, Rational(2), 1}}) {
    auto r = kondratiev_norm(TestFunction::constant(1), space(0, c.a, c.p), DomainSpec::smooth_cone(c.d, c.g), q);
    const double p = to_double(c.p), want = solid_angle(c.d, c.g) / (c.d - to_double(c.a) * p);
    CHECK(std::pow(r.value, p) == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.series.converged);
    // shells of a pure power decay geometrically with exponent d - a p
    CHECK(*r.series.tail_slope == doctest::Approx(-(c.d - to_double(c.a) * p)).epsilon(1e-9));
  }
}

TEST_CASE("dilation identity for functions inside a shell") {
  QuadSpec q;
  q.target_rel_error = 1e-4;
  for (int d : {2, 3}) {
    DomainSpec dom = DomainSpec::model(d, 1);
    std::vector<double> c(d, 0.0);
    c[0] = 0.75;
    auto u = TestFunction::rho_power(-0.3, 1) * TestFunction::bump(c, 0.24);
    for (int m : {0, 1}) {
      auto sp = space(m, Rational(1, 2), 2);
      auto n1 = kondratiev_norm(u, sp, dom, q);
      for (double lam : {2.0, 8.0}) {
        auto nl = kondratiev_norm(u.dilate(lam), sp, dom, q);
        CHECK(nl.value / n1.value == doctest::Approx(std::pow(lam, 0.5 - d / 2.0)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("shell decay of rho^b psi matches the radial exponent") {
  QuadSpec q;
  struct Case {
    int d, l, m;
    double b;
    Rational a, p;
  };
  for (const auto& c : {Case{3, 0, 1, -0.4, Rational(7, 5), 2}, Case{3, 1, 2, 0.5, Rational(1, 2), 2},
                        Case{2, 0, 1, 0.25, Rational(3, 4), 3}, Case{2, 1, 1, -0.2, Rational(0), 1}}) {
    auto u = TestFunction::rho_power(c.b, c.l) * TestFunction::psi();
    auto r = norm_pair(u, space(c.m, c.a, c.p), DomainSpec::model(c.d, c.l), q, false).full;
    const double p = to_double(c.p);
    const double want = -((c.b - to_double(c.a)) * p + (c.d - c.l));
    REQUIRE(r.series.tail_slope);
    CHECK(std::abs(*r.series.tail_slope - want) < 0.02);
    // per-shell slope deep down as well
    CHECK(std::log2(r.series.at(30) / r.series.at(20)) / 10 == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("membership detector at the rho^b psi threshold") {
  QuadSpec q;
  auto u = TestFunction::rho_power(-0.4) * TestFunction::psi();
  DomainSpec dom = DomainSpec::model(3, 0);
  // space exponent a + b; threshold a = 3/2
  CHECK(membership_detect(u, space(1, Rational(7, 5) - Rational(2, 5), 2), dom, q) == Membership::Convergent);
  CHECK(membership_detect(u, space(1, Rational(3, 2) - Rational(2, 5), 2), dom, q) == Membership::Borderline);
  CHECK(membership_detect(u, space(1, Rational(8, 5) - Rational(2, 5), 2), dom, q) == Membership::Divergent);
  auto r = kondratiev_norm(u, space(1, Rational(8, 5) - Rational(2, 5), 2), dom, q);
  CHECK_FALSE(r.series.converged);
  CHECK(std::isinf(r.value));
  CHECK(*r.series.tail_slope >= 0);
}

TEST_CASE("f_alpha threshold alpha < d/p - m") {
  QuadSpec q;
  DomainSpec dom = DomainSpec::model(3, 0);
  // in K^m_{m,p} every order carries the Sobolev radial exponent
  for (int m : {0, 1, 2}) {
    const double thr = 3.0 / 2 - m;
    for (double da : {-0.1, 0.1}) {
      auto u = TestFunction::f_alpha(thr + da);
      auto got = membership_detect(u, space(m, Rational(m), 2), dom, q);
      CHECK(got == (da < 0 ? Membership::Convergent : Membership::Divergent));
    }
  }
}

TEST_CASE("extremal norm") {
  QuadSpec q;
  DomainSpec dom = DomainSpec::model(3, 0);
  auto u = TestFunction::rho_power(0.3) * TestFunction::psi();
  auto np0 = norm_pair(u, space(0, Rational(1), 2), dom, q);
  CHECK(np0.full.value == np0.extremal.value);
  for (int m : {1, 2}) {
    for (double lam : {1.0, 4.0, 64.0}) {
      auto np = norm_pair(u.dilate(lam), space(m, Rational(1), 2), dom, q);
      CHECK(np.extremal.value <= np.full.value);
      CHECK(np.extremal.value > 0.2 * np.full.value);
    }
  }
  auto e = extremal_norm(u, space(2, Rational(1), 2), dom, q);
  CHECK(e.value == norm_pair(u, space(2, Rational(1), 2), dom, q).extremal.value);
}

TEST_CASE("other domains") {
  QuadSpec q;
  // nonsmooth cone in the plane: int_0^T x^{-2a} (1 - x/T) dx with T = tan(gamma)
  {
    const double g = 0.6, T = std::tan(g), e = 0.5;
    auto r = kondratiev_norm(TestFunction::constant(1), space(0, Rational(1, 4), 2), DomainSpec::nonsmooth_cone(2, g), q);
    CHECK(r.value * r.value == doctest::Approx(std::pow(T, 1 - e) / (1 - e) - std::pow(T, 1 - e) / (2 - e)).epsilon(1e-9));
  }
  // quarter of a circular cone
  {
    auto r = kondratiev_norm(TestFunction::constant(1), space(0, Rational(0), 2), DomainSpec::nonsmooth_cone(3, 0.5), q);
    CHECK(r.value * r.value == doctest::Approx(std::numbers::pi / 12 * std::tan(0.5) * std::tan(0.5)).epsilon(1e-9));
  }
  // unit cube
  for (int l : {1, 2}) {
    auto r = kondratiev_norm(TestFunction::constant(1), space(0, Rational(0), 2), DomainSpec::dihedral(3, l), q);
    CHECK(r.value * r.value == doctest::Approx(1.0).epsilon(1e-6));
  }
  // pyramid over a square of circumradius 1
  {
    auto r = kondratiev_norm(TestFunction::constant(1), space(0, Rational(0), 2),
                             DomainSpec::polyhedral(regular_polygon(4, 1.0, 0.3)), QuadSpec::profile("fast"));
    CHECK(r.value * r.value == doctest::Approx(2.0 / 3).epsilon(1e-9));
  }
}

TEST_CASE("p = infinity") {
  QuadSpec q;
  DomainSpec cone = DomainSpec::smooth_cone(3, 0.8);
  auto r = kondratiev_norm(TestFunction::constant(1), SpaceParams{0, Rational(0), Exponent::infinity()}, cone, q);
  CHECK(r.lower_bound);
  CHECK(r.value == 1.0);
  CHECK(membership_detect(TestFunction::constant(1), SpaceParams{0, Rational(0), Exponent::infinity()}, cone, q) ==
        Membership::Convergent);
  CHECK(membership_detect(TestFunction::constant(1), SpaceParams{0, Rational(1, 2), Exponent::infinity()}, cone,
                          q) == Membership::Divergent);
  auto u = TestFunction::rho_power(1.0);
  auto v = kondratiev_norm(u, SpaceParams{1, Rational(1), Exponent::infinity()}, cone, q);
  // rho^{-1} |x| = 1 and rho^0 |grad |x|| = 1
  CHECK(v.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature refinement stays within the estimate") {
  auto u = TestFunction::rho_power(-0.4) * TestFunction::psi();
  DomainSpec dom = DomainSpec::model(3, 0);
  auto sp = space(1, Rational(1), 2);
  QuadSpec q;
  auto a = kondratiev_norm(u, sp, dom, q);
  QuadSpec q2 = q;
  q2.radial_panels *= 2;
  q2.angular_order = 31;
  auto b = kondratiev_norm(u, sp, dom, q2);
  CHECK(std::abs(b.value / a.value - 1) < std::max(a.est_rel_error, 1e-12));
  CHECK(a.est_rel_error <= 10 * q.target_rel_error);
}

TEST_CASE("series bookkeeping") {
  QuadSpec q;
  auto u = TestFunction::rho_power(0.2) * TestFunction::psi();
  auto r = kondratiev_norm(u, space(2, Rational(1, 2), 2), DomainSpec::model(2, 0), q);
  const auto& S = r.series;
  CHECK(S.s.size() == static_cast<size_t>(S.j_max - S.j1 + 1));
  double mx = 0, sum = 0;
  for (size_t i = 0; i < S.s.size(); ++i) {
    CHECK(S.s[i] >= 0);
    double parts = 0;
    for (double v : S.order[i]) parts += v;
    CHECK(parts == doctest::Approx(S.s[i]).epsilon(1e-14));
    mx = std::max(mx, S.s[i]);
    sum += S.s[i];
  }
  CHECK(S.total >= mx);
  CHECK(S.total == doctest::Approx(sum));
  CHECK(S.tail > 0);
  // supported away from M: tail vanishes identically
  auto b = kondratiev_norm(TestFunction::bump({0.5, 0.5}, 0.2), space(1, Rational(0), 2), DomainSpec::model(2, 0), q);
  CHECK_FALSE(b.series.tail_slope);
  CHECK(b.series.converged);
  CHECK(b.series.tail == 0);
}

TEST_CASE("errors") {
  QuadSpec q;
  DomainSpec dom = DomainSpec::model(3, 0);
  CHECK(code_of([&] { kondratiev_norm(TestFunction::psi().with_max_order(1), space(2, Rational(0), 2), dom, q); }) ==
        ErrorCode::OrderExceeded);
  CHECK(code_of([&] { kondratiev_norm(TestFunction::rho_power(1.0), space(0, Rational(0), 2), dom, q); }) ==
        ErrorCode::UnboundedSupport);
  QuadSpec bad = q;
  bad.j_max = 5;
  CHECK(code_of([&] { kondratiev_norm(TestFunction::psi(), space(0, Rational(0), 2), dom, bad); }) ==
        ErrorCode::InvalidParams);
  bad = q;
  bad.j_max = 20;
  CHECK(code_of([&] { membership_detect(TestFunction::psi(), space(0, Rational(0), 2), dom, bad); }) ==
        ErrorCode::InvalidParams);
  bad = q;
  bad.target_rel_error = 1e-3;
  CHECK(code_of([&] { kondratiev_norm(TestFunction::psi(), space(0, Rational(0), 2), dom, bad); }) ==
        ErrorCode::InvalidParams);
  CHECK(code_of([&] { QuadSpec::profile("turbo"); }) == ErrorCode::InvalidParams);
  CHECK(QuadSpec::profile("fast").j_max == 32);
}
