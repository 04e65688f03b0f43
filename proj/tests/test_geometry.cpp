#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kondratiev/errors.hpp"
#include "kondratiev/geometry.hpp"

using namespace kondratiev;

namespace {

// Uniform samples from a box, kept when inside the domain.
std::vector<Point> sample(const DomainSpec& dom, int count, unsigned seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < count) {
    Point x(dom.d);
    for (auto& v : x) v = U(rng);
    // bias toward the singular set so deep shells are exercised
    double s = std::pow(2.0, -12 * std::uniform_real_distribution<double>(0, 1)(rng));
    int k = dom.kind == DomainKind::ModelCase || dom.kind == DomainKind::DihedralCube ? dom.d - dom.l
            : dom.kind == DomainKind::NonsmoothCone                                   ? dom.d - 1
                                                                                      : dom.d;
    for (int i = 0; i < k; ++i) x[i] *= s;
    if (dom.kind == DomainKind::SmoothCone) x[dom.d - 1] = std::abs(x[dom.d - 1]) + 0.3 * s;
    if (contains(dom, x)) pts.push_back(x);
  }
  return pts;
}

std::vector<DomainSpec> exact_domains() {
  return {DomainSpec::model(3, 0),         DomainSpec::model(3, 1),        DomainSpec::model(2, 0),
          DomainSpec::model(2, 1),         DomainSpec::smooth_cone(3, 0.8), DomainSpec::smooth_cone(2, 1.2),
          DomainSpec::nonsmooth_cone(3, 0.9), DomainSpec::nonsmooth_cone(2, 0.6), DomainSpec::dihedral(3, 1),
          DomainSpec::dihedral(3, 2)};
}

}  // namespace

TEST_CASE("weights") {
  const auto m30 = DomainSpec::model(3, 0);
  Point a{0.25, 0, 0};
  CHECK(weight(m30, a) == 0.25);
  Point b{0.3, 0.4, 0.9};
  CHECK(weight(DomainSpec::model(3, 1), b) == doctest::Approx(0.5).epsilon(1e-15));
  Point c{3, 0, 0};
  CHECK(weight(m30, c) == 1.0);
  Point out{0, 0, 0.5};
  CHECK_THROWS_AS(weight(DomainSpec::model(3, 2), out), Error);
  CHECK_THROWS_AS(weight(DomainSpec::smooth_cone(3, 0.5), Point{0.5, 0, 0.1}), Error);
}

TEST_CASE("polyhedral weight against brute force edge sampling") {
  auto q = DomainSpec::polyhedral(regular_polygon(4, 1.0, std::numbers::pi / 4));
  // bisector plane x1 = x2 at height 1/2
  for (double t : {-0.2, 0.0, 0.1, 0.25}) {
    Point x{t, t, 0.5};
    REQUIRE(contains(q, x));
    double brute = 1e300;
    for (const auto& V : q.edges)
      for (int i = 0; i <= 200000; ++i) {
        double s = i / 200000.0;
        double dx = x[0] - s * V[0], dy = x[1] - s * V[1], dz = x[2] - s;
        brute = std::min(brute, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
    CHECK(weight(q, x) == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("weight is capped and 1-Lipschitz") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0, 1e-3);
  for (const auto& dom : exact_domains()) {
    for (const auto& x : sample(dom, 400, 5, 0.0, 1.0)) {
      double w = weight(dom, x);
      CHECK(w <= 1.0);
      Point y = x;
      for (auto& v : y) v += N(rng);
      if (!contains(dom, y)) continue;
      double dist = 0;
      for (int i = 0; i < dom.d; ++i) dist += (x[i] - y[i]) * (x[i] - y[i]);
      CHECK(std::abs(weight(dom, y) - w) <= std::sqrt(dist) * (1 + 1e-12));
    }
  }
}

TEST_CASE("shell membership") {
  CHECK(shells_of_weight(0.25, 0) == std::vector<int>{2});
  CHECK(shells_of_weight(0.75, 0) == std::vector<int>{0, 1});
  CHECK(shells_of_weight(std::ldexp(1.5, -10), 0) == std::vector<int>{9, 10});
  CHECK(shells_of_weight(1.0, 0) == std::vector<int>{0});
  for (double w = 1e-6; w <= 1; w *= 1.37) {
    auto s = shells_of_weight(w, 0);
    CHECK(s.size() >= 1);
    CHECK(s.size() <= 2);
  }
  CHECK_THROWS_AS(shells_of_weight(0.0, 0), Error);
}

TEST_CASE("starting shell indices") {
  auto m = start_indices(DomainSpec::model(3, 1));
  CHECK(m.j0 == 0);
  CHECK(m.j1 == 0);
  auto k = start_indices(DomainSpec::smooth_cone(3, 0.7));
  CHECK(k.j0 == 1);
  CHECK(k.j1 == 0);
  CHECK(!k.attained);
  auto n = start_indices(DomainSpec::nonsmooth_cone(3, 0.2));  // sup |x'| = tan 0.2
  CHECK(n.sup_weight == doctest::Approx(std::tan(0.2)));
  CHECK(n.j0 == 3);  // 2^{-2} > tan 0.2 > 2^{-3}
  CHECK(n.j1 == 2);
  auto h = start_indices(DomainSpec::dihedral(2, 1));  // sup x1 = 1 not attained
  CHECK(h.j0 == 1);
  CHECK(h.j1 == 0);
}

TEST_CASE("solid angle") {
  for (double g : {0.3, 1.0, 2.5}) {
    CHECK(solid_angle(3, g) == doctest::Approx(2 * std::numbers::pi * (1 - std::cos(g))).epsilon(1e-13));
    CHECK(solid_angle(2, g) == doctest::Approx(2 * g));
  }
  CHECK(solid_angle(3, std::numbers::pi) == doctest::Approx(4 * std::numbers::pi));
}

TEST_CASE("regularized weight two-sided bounds") {
  for (const auto& dom : exact_domains())
    for (const auto& x : sample(dom, 500, 17, 0.0, 1.0)) {
      double r = weight(dom, x), rt = regularized_weight(dom, x);
      CHECK(rt <= r * (1 + 1e-15));
      CHECK(rt >= 0.875 * r * (1 - 1e-15));
    }
  auto q = DomainSpec::polyhedral(regular_polygon(4, 1.0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1, 1), H(0, 1);
  double lo = 1e300, hi = 0;
  int n = 0;
  while (n < 5000) {
    double h = H(rng);
    Point x{h * U(rng), h * U(rng), h};
    if (!contains(q, x)) continue;
    ++n;
    double ratio = regularized_weight(q, x) / weight(q, x);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  MESSAGE("polyhedral rho~/rho in [" << lo << ", " << hi - 1 << " + 1]");
  CHECK(lo > 0.5);
  CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("partition of unity") {
  for (const auto& dom : exact_domains()) {
    auto spec = PartitionSpec::for_domain(dom);
    for (const auto& x : sample(dom, 1000, 23, 0.0, 1.0)) {
      double sum = 0;
      double w = weight(dom, x);
      for (int j = spec.j1; j <= 40; ++j) {
        double phi = partition_value(spec, dom, j, x, 0).value();
        CHECK(phi >= 0);
        CHECK(phi <= 1);
        sum += phi;
        // support containment in Omega_j
        if (phi != 0) {
          CHECK(std::ldexp(1.0, -j - 1) < w);
          CHECK(w < std::ldexp(1.0, -j + 1));
        }
      }
      CHECK(std::abs(sum - 1) < 1e-12);
    }
  }
}

TEST_CASE("partition sums to one at 10^4 points") {
  const auto dom = DomainSpec::model(3, 1);
  auto spec = PartitionSpec::for_domain(dom);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-2, 2), E(0, 20);
  for (int i = 0; i < 10000; ++i) {
    double s = std::pow(2.0, -E(rng));
    Point x{s * U(rng), s * U(rng), U(rng)};
    if (!contains(dom, x)) continue;
    double sum = 0;
    for (int j = 0; j <= 40; ++j) sum += partition_value(spec, dom, j, x, 0).value();
    REQUIRE(std::abs(sum - 1) < 1e-12);
  }
}

TEST_CASE("model case self-similarity is exact") {
  for (const auto& dom : {DomainSpec::model(3, 0), DomainSpec::model(3, 1), DomainSpec::model(2, 1)}) {
    auto spec = PartitionSpec::for_domain(dom);
    for (const auto& x : sample(dom, 300, 31, -1.0, 1.0)) {
      for (int j = 1; j <= 12; ++j) {
        Point y = x;
        for (auto& v : y) v = std::ldexp(v, j - 1);
        CHECK(partition_value(spec, dom, j, x, 0).value() == partition_value(spec, dom, 1, y, 0).value());
      }
    }
  }
}

TEST_CASE("shell centre gives phi_j = 1") {
  const auto dom = DomainSpec::model(3, 0);
  auto spec = PartitionSpec::for_domain(dom);
  for (int j = 1; j <= 20; ++j) {
    Point x{std::ldexp(1.0, -j), 0, 0};
    CHECK(partition_value(spec, dom, j, x, 0).value() == 1.0);
    CHECK(partition_value(spec, dom, j - 1, x, 0).value() == 0.0);
    CHECK(partition_value(spec, dom, j + 1, x, 0).value() == 0.0);
  }
}

TEST_CASE("partition derivatives") {
  const auto dom = DomainSpec::model(3, 0);
  auto spec = PartitionSpec::for_domain(dom);
  // finite-difference oracle
  Point x{0.09, 0.05, -0.04};
  const int j = 3;
  auto pv = partition_value(spec, dom, j, x, 2);
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    Point a = x, b = x;
    a[i] += h;
    b[i] -= h;
    double fd = (partition_value(spec, dom, j, a, 0).value() - partition_value(spec, dom, j, b, 0).value()) / (2 * h);
    MultiIndex e{0, 0, 0};
    e[i] = 1;
    CHECK(pv.derivative(e) == doctest::Approx(fd).epsilon(1e-5));
  }
  // |grad phi_j| <= C 2^j with C measured once; frozen with headroom
  const double frozen = 2 * 8.3;
  double worst = 0;
  for (const auto& y : sample(DomainSpec::model(3, 0), 2000, 41, -1.0, 1.0))
    for (int jj = 0; jj <= 14; ++jj) {
      auto p = partition_value(spec, dom, jj, y, 1);
      double g = std::sqrt(std::pow(p.values[1], 2) + std::pow(p.values[2], 2) + std::pow(p.values[3], 2));
      worst = std::max(worst, g / std::ldexp(1.0, jj));
    }
  MESSAGE("max |grad phi_j| / 2^j = " << worst);
  CHECK(worst <= frozen);
  CHECK_THROWS_AS(partition_value(spec, dom, 1, x, 7), Error);
}

TEST_CASE("polyhedral cone decomposition") {
  auto check = [](const DomainSpec& q, size_t n) {
    auto D = decompose_polyhedral_cone(q);
    CHECK(D.edge_pieces.size() == n);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-2, 2), H(0, 1);
    int n_pts = 0;
    while (n_pts < 4000) {
      double h = H(rng);
      Point x{h * U(rng), h * U(rng), h};
      if (!contains(q, x)) continue;
      ++n_pts;
      int c = D.pieces_containing(x);
      CHECK(c >= 1);
      CHECK(c <= 2);
      int edges = 0;
      for (size_t k = 0; k < n; ++k) edges += D.in_edge_piece(static_cast<int>(k), x);
      CHECK(edges <= 1);
    }
    CHECK(D.edge_ratio_lo > 0);
    CHECK(D.vertex_ratio_lo > 0);
    return D;
  };
  auto sq = check(DomainSpec::polyhedral(regular_polygon(4, 1.0)), 4);
  for (const auto& e : sq.edge_pieces) CHECK(e.gamma == doctest::Approx(sq.edge_pieces[0].gamma).epsilon(1e-12));
  check(DomainSpec::polyhedral(regular_polygon(3, 1.0)), 3);
  // thin triangle, one interior angle close to pi
  check(DomainSpec::polyhedral(polygon_from_angles({0.0, 3.0, 3.3}, 1.0)), 3);
  CHECK_THROWS_AS(decompose_polyhedral_cone(DomainSpec::polyhedral({{0, 0}, {1, 0}, {2, 0}})), Error);
}
