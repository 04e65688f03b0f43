#include <cmath>
#include <random>

#include "doctest.h"
#include "kondratiev/jet.hpp"
#include "kondratiev/profiles.hpp"

using namespace kondratiev;

namespace {

// f(x, y, z) = exp(x y) (x^2 + z)^0.3 / (1 + y^2)
template <class T>
T f_plain(T x, T y, T z) {
  return std::exp(x * y) * std::pow(x * x + z, 0.3) / (1 + y * y);
}

Jet f_jet(const Jet* X) {
  const JetLayout& L = X[0].layout();
  Jet one(L, 1.0);
  return exp(X[0] * X[1]) * pow(X[0] * X[0] + X[2], 0.3) * reciprocal(one + X[1] * X[1]);
}

}  // namespace

TEST_CASE("layout sizes and ordering") {
  const auto& L = JetLayout::get(3, 6);
  CHECK(L.size == 84);
  CHECK(L.exps[0] == MultiIndex{0, 0, 0});
  CHECK(L.exps[1] == MultiIndex{1, 0, 0});
  CHECK(L.index({1, 2, 3}) >= 0);
  CHECK(L.index({4, 2, 3}) == -1);
  CHECK(JetLayout::max_order(3) == 7);
  CHECK_THROWS(JetLayout::get(3, 8));
  CHECK_THROWS(JetLayout::get(4, 1));
}

TEST_CASE("jet derivatives match finite differences") {
  const auto& L = JetLayout::get(3, 2);
  const double x = 0.3, y = -0.4, z = 0.7;
  Jet X[3] = {Jet::variable(L, 0, x), Jet::variable(L, 1, y), Jet::variable(L, 2, z)};
  Jet F = f_jet(X);
  CHECK(F.value() == doctest::Approx(f_plain(x, y, z)).epsilon(1e-14));
  const double h = 1e-4;
  double fx = (f_plain(x + h, y, z) - f_plain(x - h, y, z)) / (2 * h);
  double fxy = (f_plain(x + h, y + h, z) - f_plain(x + h, y - h, z) - f_plain(x - h, y + h, z) +
                f_plain(x - h, y - h, z)) /
               (4 * h * h);
  double fzz = (f_plain(x, y, z + h) - 2 * f_plain(x, y, z) + f_plain(x, y, z - h)) / (h * h);
  CHECK(F.derivative({1, 0, 0}) == doctest::Approx(fx).epsilon(1e-7));
  CHECK(F.derivative({1, 1, 0}) == doctest::Approx(fxy).epsilon(1e-6));
  CHECK(F.derivative({0, 0, 2}) == doctest::Approx(fzz).epsilon(1e-6));
}

TEST_CASE("high order univariate jets are exact for exp and powers") {
  const auto& L = JetLayout::get(1, 7);
  Jet X = Jet::variable(L, 0, 0.8);
  Jet E = exp(X * 2.0);
  Jet P = pow(X, -0.4);
  double fact = 1;
  for (int k = 0; k <= 7; ++k) {
    if (k > 1) fact *= k;
    CHECK(E.coeff(k) * fact == doctest::Approx(std::pow(2.0, k) * std::exp(1.6)).epsilon(1e-12));
    double c = 1;
    for (int i = 0; i < k; ++i) c *= (-0.4 - i);
    CHECK(P.coeff(k) * fact == doctest::Approx(c * std::pow(0.8, -0.4 - k)).epsilon(1e-12));
  }
  Jet Lg = log(X);
  CHECK(Lg.coeff(3) * 6 == doctest::Approx(2.0 / std::pow(0.8, 3)).epsilon(1e-12));
}

TEST_CASE("smooth step symmetry and integral") {
  for (double u = 0.01; u < 1; u += 0.0137) {
    CHECK(smooth_step(u) + smooth_step(1 - u) == doctest::Approx(1.0).epsilon(1e-15));
    double d[8];
    smooth_step(u, 3, d);
    CHECK(d[0] == doctest::Approx(smooth_step(u)).epsilon(1e-14));
    const double h = 1e-5;
    CHECK(d[1] == doctest::Approx((smooth_step(u + h) - smooth_step(u - h)) / (2 * h)).epsilon(1e-6));
  }
  CHECK(step_integral(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  // from S(1-s) = 1 - S(s): G(1-u) = 1/2 - u + G(u)
  for (double u : {0.1, 0.3, 0.45})
    CHECK(step_integral(1 - u) == doctest::Approx(0.5 - u + step_integral(u)).epsilon(1e-13));
}

TEST_CASE("partition profile sums to one on the line") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    double t = U(rng), s = 0;
    for (int k = -8; k <= 8; ++k) s += partition_profile(t - k);
    CHECK(std::abs(s - 1) < 1e-14);
  }
  CHECK(partition_profile(0.0) == 1.0);
  CHECK(partition_profile(1.0) == 0.0);
  CHECK(partition_profile(-0.75) == 0.0);
}

TEST_CASE("cap profile replaces min(1, r) smoothly") {
  double g[6];
  cap_profile(0.5, 3, g);
  CHECK(g[0] == 0.5);
  CHECK(g[1] == 1.0);
  cap_profile(1.2, 3, g);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 0.0);
  cap_profile(1.125 - 1e-12, 1, g);
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (double r = 0.8; r < 1.2; r += 0.01) {
    cap_profile(r, 2, g);
    double gp[1], gm[1];
    const double h = 1e-6;
    cap_profile(r + h, 0, gp);
    cap_profile(r - h, 0, gm);
    CHECK(g[1] == doctest::Approx((gp[0] - gm[0]) / (2 * h)).epsilon(1e-6));
    CHECK(g[0] <= std::min(1.0, r) + 1e-15);
    CHECK(g[0] >= 0.875 * std::min(1.0, r));
  }
}

TEST_CASE("cutoff and bump profiles") {
  double c[4];
  cutoff_profile(0.9, 2, c);
  CHECK(c[0] == 1.0);
  cutoff_profile(1.25, 2, c);
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
  cutoff_profile(1.6, 2, c);
  CHECK(c[0] == 0.0);
  bump_profile(0.0, 2, c);
  CHECK(c[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(-std::exp(-1.0)).epsilon(1e-13));
}
