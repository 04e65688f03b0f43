#include <cmath>
#include <random>

#include "doctest.h"
#include "kondratiev/errors.hpp"
#include "kondratiev/geometry.hpp"
#include "kondratiev/testfuncs.hpp"

using namespace kondratiev;

namespace {

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// fourth order central difference of d^alpha u along coordinate i
double fd(const TestFunction& u, MultiIndex alpha, std::vector<double> x, int i, double h = 1e-4) {
  auto at = [&](double t) {
    auto y = x;
    y[i] += t;
    return u.eval_derivative(alpha, y);
  };
  return (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
}

}  // namespace

TEST_CASE("closed forms") {
  auto u = TestFunction::rho_power(-0.4);
  std::vector<double> x{0.3, -0.2, 0.5};
  const double r = norm(x);
  CHECK(u.value(x) == doctest::Approx(std::pow(r, -0.4)).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) {
    MultiIndex a{0, 0, 0};
    a[i] = 1;
    CHECK(u.eval_derivative(a, x) == doctest::Approx(-0.4 * x[i] * std::pow(r, -2.4)).epsilon(1e-13));
  }
  // second derivative d_00 |x|^b = b |x|^{b-2} + b (b-2) x_0^2 |x|^{b-4}
  double want = -0.4 * std::pow(r, -2.4) + -0.4 * -2.4 * x[0] * x[0] * std::pow(r, -4.4);
  CHECK(u.eval_derivative({2, 0, 0}, x) == doctest::Approx(want).epsilon(1e-12));

  // partial weight: only x' = first d - l coordinates
  auto v = TestFunction::rho_power(1.0, 1);
  CHECK(v.value(x) == doctest::Approx(std::hypot(0.3, 0.2)).epsilon(1e-14));
  CHECK(v.eval_derivative({0, 0, 1}, x) == 0.0);

  // f_alpha equals |x|^{-alpha} inside the unit ball and vanishes beyond 3/2
  auto f = TestFunction::f_alpha(0.7);
  CHECK(f.value(x) == doctest::Approx(std::pow(r, -0.7)).epsilon(1e-14));
  CHECK(f.value(std::vector<double>{1.2, 0.9, 0.1}) == 0.0);
  CHECK(TestFunction::psi().value(std::vector<double>{0.5, 0.5}) == 1.0);
  CHECK(TestFunction::psi().value(std::vector<double>{1.0, 1.2}) == 0.0);
  double p = TestFunction::psi().value(std::vector<double>{1.2, 0.0});
  CHECK(p > 0);
  CHECK(p < 1);

  auto b = TestFunction::bump({0.5, 0.5}, 0.25);
  CHECK(b.value(std::vector<double>{0.5, 0.5}) == doctest::Approx(std::exp(-1.0)));
  CHECK(b.value(std::vector<double>{0.5, 0.8}) == 0.0);

  // rho_pow with even integer b is a polynomial and fine at the origin
  CHECK(TestFunction::rho_power(2.0).value(std::vector<double>{0, 0}) == 0.0);
}

TEST_CASE("derivatives against finite differences") {
  DomainSpec cone = DomainSpec::smooth_cone(3, 0.9);
  std::vector<TestFunction> fs = {
      TestFunction::rho_power(0.6) * TestFunction::psi(),
      TestFunction::f_alpha(0.3, {0.1, 0.0, 0.2}) * TestFunction::bump({0.2, 0.1, 0.3}, 0.9),
      TestFunction::rho_power(1.3, 1).dilate(1.7) + TestFunction::psi().translate({0.2, 0.2, 0.2}).scale(3.0),
      TestFunction::rho_tilde(-0.5, cone) * TestFunction::psi(),
      TestFunction::partition(1, cone) * TestFunction::rho_power(0.5),
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  int checked = 0;
  for (const auto& u : fs) {
    for (int n = 0; n < 40; ++n) {
      std::vector<double> x{U(rng), U(rng), std::abs(U(rng)) + 0.25};
      if (!contains(cone, x)) continue;
      for (MultiIndex a : {MultiIndex{0, 0, 0}, MultiIndex{1, 0, 0}, MultiIndex{0, 1, 1}, MultiIndex{2, 0, 1}}) {
        for (int i = 0; i < 3; ++i) {
          MultiIndex b = a;
          ++b[i];
          double exact = u.eval_derivative(b, x);
          double approx = fd(u, a, x, i);
          CHECK(exact == doctest::Approx(approx).epsilon(1e-5).scale(1.0));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("dilation identities") {
  auto u = TestFunction::f_alpha(0.4) * TestFunction::rho_power(1.5, 1);
  std::vector<double> x{0.21, -0.13, 0.4};
  for (double lambda : {0.5, 2.0, 8.0}) {
    auto v = u.dilate(lambda);
    std::vector<double> lx{lambda * x[0], lambda * x[1], lambda * x[2]};
    for (MultiIndex a : {MultiIndex{0, 0, 0}, MultiIndex{1, 0, 0}, MultiIndex{1, 1, 1}, MultiIndex{0, 3, 0}}) {
      double k = a[0] + a[1] + a[2];
      CHECK(v.eval_derivative(a, x) == doctest::Approx(std::pow(lambda, k) * u.eval_derivative(a, lx)).epsilon(1e-12));
    }
  }
  // nested dilations collapse
  auto w = u.dilate(2.0).dilate(3.0);
  CHECK(w.str() == u.dilate(6.0).str());
  CHECK(u.dilate(1.0).str() == u.str());
  // homogeneity of rho_pow
  auto r = TestFunction::rho_power(-0.7);
  CHECK(r.dilate(4.0).value(x) == doctest::Approx(std::pow(4.0, -0.7) * r.value(x)).epsilon(1e-14));
}

TEST_CASE("product normalization") {
  auto a = TestFunction::rho_power(1.0) * TestFunction::rho_power(2.0);
  CHECK(a.str() == "rho_pow(b=3,l=0)");
  auto u = TestFunction::psi() * TestFunction::f_alpha(0.5);
  CHECK((u * TestFunction::constant(1.0)).str() == u.str());
  CHECK((TestFunction::constant(1.0) * u).str() == u.str());
  auto c = TestFunction::constant(2.0) * TestFunction::psi() * TestFunction::constant(3.0);
  CHECK(c.str() == "6*psi()");
  // different l stay separate
  auto m = TestFunction::rho_power(1.0, 0) * TestFunction::rho_power(1.0, 1);
  CHECK(m.str() == "rho_pow(b=1,l=0)*rho_pow(b=1,l=1)");
  // the merged exponent cancels the singularity
  auto z = TestFunction::rho_power(-1.0) * TestFunction::rho_power(1.0);
  CHECK(z.value(std::vector<double>{0.0, 0.0}) == 1.0);
  // a singular factor is skipped where a compact factor vanishes
  auto s = TestFunction::rho_power(-1.0) * TestFunction::bump({1.0, 1.0}, 0.5);
  CHECK(s.value(std::vector<double>{0.0, 0.0}) == 0.0);
}

TEST_CASE("errors") {
  auto u = TestFunction::rho_power(-0.5);
  CHECK_THROWS_WITH_AS(u.value(std::vector<double>{0.0, 0.0}), doctest::Contains("singular"), Error);
  try {
    u.value(std::vector<double>{0.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPoint);
  }
  auto v = u.with_max_order(2);
  CHECK_NOTHROW(v.eval_derivative({1, 1, 0}, std::vector<double>{0.1, 0.2}));
  try {
    v.eval_derivative({2, 1, 0}, std::vector<double>{0.1, 0.2});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderExceeded);
  }
  CHECK_THROWS_AS(TestFunction::bump({0.0}, 0.0), Error);
  CHECK_THROWS_AS(parse_function("rho_pow(q=1)"), Error);
  CHECK_THROWS_AS(parse_function("phi(j=1)"), Error);
  CHECK_THROWS_AS(parse_function("psi() *"), Error);
  CHECK_THROWS_AS(parse_function("nope()"), Error);
}

TEST_CASE("parser and round trip") {
  DomainSpec cone = DomainSpec::nonsmooth_cone(3, 0.9);
  std::vector<std::string> exprs = {
      "rho_pow(b=-0.4)*psi()",
      "dilate(2, f_alpha(a=0.4)*bump(r=1))",
      "rho_pow(b=3/2, l=1) + 2*psi()",
      "translate([0.1,0,-0.2], bump(r=0.5, c=[0.2,0.2,0.2])) - psi()",
      "scale(1e-3, rho_tilde(b=-1/3)*phi(j=2))",
      "-(psi())*f_alpha(a=0.25, x0=[0,0,0.1])",
  };
  std::vector<double> x{0.11, 0.07, 0.4};
  for (const auto& e : exprs) {
    CAPTURE(e);
    auto u = parse_function(e, &cone);
    auto w = parse_function(u.str(), &cone);
    CHECK(w.str() == u.str());
    CHECK(w.value(x) == u.value(x));
  }
  CHECK(parse_function("rho_pow(b=3/2)").value(std::vector<double>{0.0, 2.0}) ==
        doctest::Approx(std::pow(2.0, 1.5)));
  // l defaults to the singular dimension of the domain
  auto dd = DomainSpec::dihedral(3, 1);
  CHECK(parse_function("rho_pow(b=1)", &dd).str() == "rho_pow(b=1,l=1)");
  CHECK(parse_function("2-psi()").value(std::vector<double>{0.0}) == 1.0);
}

TEST_CASE("support descriptors") {
  auto u = TestFunction::rho_power(-0.4) * TestFunction::bump({0.5, 0.5}, 0.25);
  Support s = u.support(2);
  CHECK(s.bounded());
  CHECK(s.excludes(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(s.excludes(std::vector<double>{0.5, 0.6}));
  CHECK(s.lo[0] == doctest::Approx(0.25));
  CHECK_FALSE(TestFunction::rho_power(1.0).support(2).bounded());
  auto d = TestFunction::psi().dilate(2.0).support(3);
  CHECK(d.hi[2] == doctest::Approx(0.75));
  auto t = TestFunction::psi().translate({1.0, 0.0}).support(2);
  CHECK(t.lo[0] == doctest::Approx(-0.5));
  CHECK(t.excludes(std::vector<double>{-0.6, 0.0}));
  auto sum = (TestFunction::bump({0.0, 0.0}, 0.1) + TestFunction::bump({1.0, 0.0}, 0.1)).support(2);
  CHECK(sum.lo[0] == doctest::Approx(-0.1));
  CHECK(sum.hi[0] == doctest::Approx(1.1));

  // partition window contains the actual support of phi_j
  DomainSpec m = DomainSpec::model(2, 0);
  auto phi = TestFunction::partition(3, m);
  Support ps = phi.support(2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int n = 0; n < 5000; ++n) {
    std::vector<double> x{U(rng), U(rng)};
    if (norm(x) == 0) continue;
    double r = weight(m, x);
    if (phi.value(x) != 0.0) {
      CHECK(r > ps.rho_lo);
      CHECK(r < ps.rho_hi);
    }
  }
}
