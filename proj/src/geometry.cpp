#include "kondratiev/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kondratiev/errors.hpp"
#include "kondratiev/profiles.hpp"

namespace kondratiev {

namespace {

constexpr double kSoftMinPower = 16.0;

double norm_first(std::span<const double> x, int k) {
  double s = 0;
  for (int i = 0; i < k; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double norm(std::span<const double> x) { return norm_first(x, static_cast<int>(x.size())); }

void check_dim(const DomainSpec& dom, std::span<const double> x) {
  if (static_cast<int>(x.size()) != dom.d)
    fail(ErrorCode::InvalidParams,
         "point has " + std::to_string(x.size()) + " coordinates, domain needs " + std::to_string(dom.d));
}

bool in_polygon(const std::vector<Vertex2>& P, double u, double v) {
  const size_t n = P.size();
  for (size_t k = 0; k < n; ++k) {
    const auto& a = P[k];
    const auto& b = P[(k + 1) % n];
    if ((b[0] - a[0]) * (v - a[1]) - (b[1] - a[1]) * (u - a[0]) <= 0) return false;
  }
  return true;
}

double dot3(const std::array<double, 3>& a, std::span<const double> x) {
  return a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
}

double angle_to(const std::array<double, 3>& axis, std::span<const double> x) {
  double c = dot3(axis, x) / norm(x);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double polyhedral_distance(const DomainSpec& dom, std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& V : dom.edges) best = std::min(best, distance_to_segment(x, {V[0], V[1], 1.0}));
  return best;
}

int codim(const DomainSpec& dom) {
  switch (dom.kind) {
    case DomainKind::ModelCase:
    case DomainKind::DihedralCube: return dom.d - dom.l;
    case DomainKind::NonsmoothCone: return dom.d - 1;
    case DomainKind::SmoothCone: return dom.d;
    case DomainKind::PolyhedralCone: return 0;
  }
  return dom.d;
}

}  // namespace

std::array<double, 3> edge_direction(const DomainSpec& q, int k) {
  const auto& V = q.edges.at(k);
  double n = std::sqrt(V[0] * V[0] + V[1] * V[1] + 1.0);
  return {V[0] / n, V[1] / n, 1.0 / n};
}

double distance_to_segment(std::span<const double> x, const std::array<double, 3>& end) {
  double ee = end[0] * end[0] + end[1] * end[1] + end[2] * end[2];
  double t = std::clamp(dot3(end, x) / ee, 0.0, 1.0);
  double s = 0;
  for (int i = 0; i < 3; ++i) {
    double r = x[i] - t * end[i];
    s += r * r;
  }
  return std::sqrt(s);
}

bool contains(const DomainSpec& dom, std::span<const double> x) {
  check_dim(dom, x);
  const int d = dom.d;
  switch (dom.kind) {
    case DomainKind::ModelCase: return norm_first(x, d - dom.l) > 0;
    case DomainKind::SmoothCone: {
      double r = norm(x);
      return r > 0 && r < 1 && x[d - 1] > r * std::cos(dom.gamma);
    }
    case DomainKind::NonsmoothCone: {
      for (double v : x)
        if (!(v > 0 && v < 1)) return false;
      return x[d - 1] > norm(x) * std::cos(dom.gamma);
    }
    case DomainKind::DihedralCube:
      for (double v : x)
        if (!(v > 0 && v < 1)) return false;
      return true;
    case DomainKind::PolyhedralCone:
      if (!(x[2] > 0 && x[2] < 1)) return false;
      return in_polygon(dom.edges, x[0] / x[2], x[1] / x[2]);
  }
  return false;
}

double distance_to_singular_set(const DomainSpec& dom, std::span<const double> x) {
  check_dim(dom, x);
  if (dom.kind == DomainKind::PolyhedralCone) return polyhedral_distance(dom, x);
  return norm_first(x, codim(dom));
}

double weight(const DomainSpec& dom, std::span<const double> x) {
  if (!contains(dom, x)) fail(ErrorCode::PointOutsideDomain, "point is outside the domain");
  return std::min(1.0, distance_to_singular_set(dom, x));
}

double smooth_distance(const DomainSpec& dom, std::span<const double> x) {
  check_dim(dom, x);
  if (dom.kind != DomainKind::PolyhedralCone) return norm_first(x, codim(dom));
  double s = 0;
  for (size_t k = 0; k < dom.edges.size(); ++k) {
    auto e = edge_direction(dom, static_cast<int>(k));
    // |x cross e|^2, free of the cancellation in |x|^2 - (x.e)^2
    double c0 = x[1] * e[2] - x[2] * e[1], c1 = x[2] * e[0] - x[0] * e[2], c2 = x[0] * e[1] - x[1] * e[0];
    s += std::pow(c0 * c0 + c1 * c1 + c2 * c2, -kSoftMinPower / 2);
  }
  return std::pow(s, -1.0 / kSoftMinPower);
}

Jet smooth_distance(const DomainSpec& dom, const Jet* X) {
  const JetLayout& L = X[0].layout();
  if (dom.kind != DomainKind::PolyhedralCone) {
    const int k = codim(dom);
    Jet s(L, 0.0);
    for (int i = 0; i < k; ++i) s += X[i] * X[i];
    if (!(s.value() > 0)) fail(ErrorCode::ZeroWeight, "point lies on the singular set");
    return sqrt(s);
  }
  Jet acc(L, 0.0);
  for (size_t k = 0; k < dom.edges.size(); ++k) {
    auto e = edge_direction(dom, static_cast<int>(k));
    Jet c0 = X[1] * e[2] - X[2] * e[1], c1 = X[2] * e[0] - X[0] * e[2], c2 = X[0] * e[1] - X[1] * e[0];
    Jet d2 = c0 * c0 + c1 * c1 + c2 * c2;
    if (!(d2.value() > 0)) fail(ErrorCode::ZeroWeight, "point lies on an edge");
    acc += pow(d2, -kSoftMinPower / 2);
  }
  return pow(acc, -1.0 / kSoftMinPower);
}

double regularized_weight(const DomainSpec& dom, std::span<const double> x) {
  double g[1];
  cap_profile(smooth_distance(dom, x), 0, g);
  return g[0];
}

Jet regularized_weight(const DomainSpec& dom, const Jet* X) {
  Jet delta = smooth_distance(dom, X);
  double g[kMaxJetCoeffs];
  cap_profile(delta.value(), delta.layout().order, g);
  return compose(delta, g);
}

StartIndices start_indices(const DomainSpec& dom) {
  dom.validate();
  StartIndices s;
  double rmax = 1;
  bool open = false;  // sup of dist not attained
  switch (dom.kind) {
    case DomainKind::ModelCase:
      rmax = std::numeric_limits<double>::infinity();
      break;
    case DomainKind::SmoothCone:
      rmax = 1;
      open = true;
      break;
    case DomainKind::NonsmoothCone: {
      rmax = std::sqrt(static_cast<double>(dom.d - 1));
      if (dom.gamma < std::numbers::pi / 2) rmax = std::min(rmax, std::tan(dom.gamma));
      open = true;
      break;
    }
    case DomainKind::DihedralCube:
      rmax = std::sqrt(static_cast<double>(dom.d - dom.l));
      open = true;
      break;
    case DomainKind::PolyhedralCone: {
      // sup over the closure is reached on the top face x3 = 1
      double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
      for (const auto& V : dom.edges) {
        lo0 = std::min(lo0, V[0]);
        hi0 = std::max(hi0, V[0]);
        lo1 = std::min(lo1, V[1]);
        hi1 = std::max(hi1, V[1]);
      }
      const int n = 400;
      rmax = 0;
      for (int i = 0; i <= n; ++i)
        for (int k = 0; k <= n; ++k) {
          double u = lo0 + (hi0 - lo0) * i / n, v = lo1 + (hi1 - lo1) * k / n;
          if (!in_polygon(dom.edges, u, v)) continue;
          double x[3] = {u, v, 1.0};
          rmax = std::max(rmax, polyhedral_distance(dom, x));
        }
      open = true;
      break;
    }
  }
  if (rmax >= 1) {
    s.sup_weight = 1;
    s.attained = rmax > 1 || !open;
  } else {
    s.sup_weight = rmax;
    s.attained = !open;
  }
  // largest j0 >= 0 with {rho >= 2^{-j0+1}} empty
  auto empty_above = [&](int j) {
    double t = std::ldexp(1.0, -j + 1);
    return t > s.sup_weight || (t == s.sup_weight && !s.attained);
  };
  s.j0 = 0;
  while (empty_above(s.j0 + 1)) ++s.j0;
  const double band_lo = std::ldexp(1.0, -s.j0) + std::ldexp(1.0, -s.j0 - 2);
  s.j1 = s.sup_weight > band_lo ? s.j0 - 1 : s.j0;
  return s;
}

double Shell::inner() const { return std::ldexp(1.0, -j - 1); }
double Shell::outer() const { return std::ldexp(1.0, -j + 1); }

std::vector<int> shells_of_weight(double w, int j1) {
  if (!(w > 0)) fail(ErrorCode::ZeroWeight, "weight is zero on the singular set");
  std::vector<int> out;
  int c = static_cast<int>(std::floor(-std::log2(w)));
  for (int j = std::max(j1, c - 2); j <= c + 2; ++j) {
    Shell s{j};
    if (s.inner() < w && w < s.outer()) out.push_back(j);
  }
  return out;
}

std::vector<int> shells_of(const DomainSpec& dom, std::span<const double> x) {
  double w = weight(dom, x);
  return shells_of_weight(w, start_indices(dom).j1);
}

double PartitionSpec::epsilon(int j) const { return std::ldexp(1.0, -j - 4); }

PartitionSpec PartitionSpec::for_domain(const DomainSpec& dom) {
  PartitionSpec s;
  s.j1 = start_indices(dom).j1;
  return s;
}

Jet partition_jet(const PartitionSpec& spec, const DomainSpec& dom, int j, const Jet* X) {
  const JetLayout& L = X[0].layout();
  if (j < spec.j1) return Jet(L, 0.0);
  Jet R = regularized_weight(dom, X);
  // s = -log2(2^j rho~), computed from the scaled weight so dilations reproduce it bit for bit
  R *= std::ldexp(1.0, j);
  Jet S = log(R) * (-1.0 / std::numbers::ln2);
  const double s = S.value();
  if (j == spec.j1 && s <= 0) return Jet(L, 1.0);
  if (std::abs(s) >= 0.75) return Jet(L, 0.0);
  double th[kMaxJetCoeffs];
  partition_profile(s, L.order, th);
  return compose(S, th);
}

double PartitionValue::derivative(const MultiIndex& alpha) const {
  for (size_t k = 0; k < alphas.size(); ++k)
    if (alphas[k] == alpha) return values[k];
  fail(ErrorCode::OrderExceeded, "multi-index beyond the requested order");
}

PartitionValue partition_value(const PartitionSpec& spec, const DomainSpec& dom, int j,
                               std::span<const double> x, int order) {
  if (order < 0 || order > 6) fail(ErrorCode::OrderExceeded, "partition derivatives are limited to order 6");
  if (!(weight(dom, x) > 0)) fail(ErrorCode::ZeroWeight, "weight is zero");
  const JetLayout& L = JetLayout::get(dom.d, order);
  std::vector<Jet> X;
  for (int i = 0; i < dom.d; ++i) X.push_back(Jet::variable(L, i, x[i]));
  Jet phi = partition_jet(spec, dom, j, X.data());
  PartitionValue pv;
  pv.order = order;
  pv.d = dom.d;
  for (int k = 0; k < L.size; ++k) {
    pv.alphas.push_back(L.exps[k]);
    pv.values.push_back(phi.coeff(k) * L.factorial[k]);
  }
  return pv;
}

double solid_angle(int d, double gamma) {
  // |S^{d-2}| * int_0^gamma sin^{d-2}
  const double sphere = 2 * std::pow(std::numbers::pi, (d - 1) / 2.0) / std::tgamma((d - 1) / 2.0);
  if (d == 2) return 2 * gamma;
  const int n = 64;
  double s = 0;
  // Gauss-Legendre by Newton on P_n
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2 * k - 1) * z * p2 - (k - 1) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double w = 2.0 / ((1 - z * z) * pp * pp);
    double t = 0.5 * gamma * (z + 1);
    s += w * std::pow(std::sin(t), d - 2);
  }
  return sphere * 0.5 * gamma * s;
}

bool ConeDecomposition::in_edge_piece(int k, std::span<const double> x) const {
  if (!contains(cone, x)) return false;
  return angle_to(edge_pieces[k].axis, x) < edge_pieces[k].gamma;
}

bool ConeDecomposition::in_smooth_piece(std::span<const double> x) const {
  if (!contains(cone, x)) return false;
  for (const auto& e : edge_pieces)
    if (!(angle_to(e.axis, x) > smooth_factor * e.gamma)) return false;
  return true;
}

int ConeDecomposition::pieces_containing(std::span<const double> x) const {
  int c = in_smooth_piece(x) ? 1 : 0;
  for (size_t k = 0; k < edge_pieces.size(); ++k) c += in_edge_piece(static_cast<int>(k), x) ? 1 : 0;
  return c;
}

double ConeDecomposition::piece_distance(int piece, std::span<const double> x) const {
  if (piece < 0) return norm(x);
  const auto& V = cone.edges[edge_pieces[piece].edge];
  return distance_to_segment(x, {V[0], V[1], 1.0});
}

ConeDecomposition decompose_polyhedral_cone(const DomainSpec& q) {
  if (q.kind != DomainKind::PolyhedralCone) fail(ErrorCode::InvalidParams, "decomposition needs a polyhedral cone");
  q.validate();
  ConeDecomposition D;
  D.cone = q;
  const int n = static_cast<int>(q.edges.size());
  for (int k = 0; k < n; ++k) {
    EdgePiece e;
    e.edge = k;
    e.axis = edge_direction(q, k);
    double gap = std::numbers::pi;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      auto o = edge_direction(q, i);
      double c = e.axis[0] * o[0] + e.axis[1] * o[1] + e.axis[2] * o[2];
      gap = std::min(gap, std::acos(std::clamp(c, -1.0, 1.0)));
    }
    e.gamma = 0.5 * gap;
    if (!(e.gamma > 1e-9)) fail(ErrorCode::DegeneratePolygon, "two edges coincide");
    D.edge_pieces.push_back(e);
  }
  // sampled comparability constants
  std::mt19937_64 rng(7);
  double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
  for (const auto& V : q.edges) {
    lo0 = std::min(lo0, V[0]);
    hi0 = std::max(hi0, V[0]);
    lo1 = std::min(lo1, V[1]);
    hi1 = std::max(hi1, V[1]);
  }
  std::uniform_real_distribution<double> U(0, 1);
  D.edge_ratio_lo = D.vertex_ratio_lo = 1e300;
  D.edge_ratio_hi = D.vertex_ratio_hi = 0;
  int got = 0;
  while (got < 20000) {
    double u = lo0 + (hi0 - lo0) * U(rng), v = lo1 + (hi1 - lo1) * U(rng), h = U(rng);
    if (!in_polygon(q.edges, u, v) || h <= 0) continue;
    double x[3] = {h * u, h * v, h};
    ++got;
    double dm = polyhedral_distance(q, x);
    for (int k = 0; k < n; ++k)
      if (D.in_edge_piece(k, x)) {
        double r = dm / D.piece_distance(k, x);
        D.edge_ratio_lo = std::min(D.edge_ratio_lo, r);
        D.edge_ratio_hi = std::max(D.edge_ratio_hi, r);
      }
    if (D.in_smooth_piece(x)) {
      double r = dm / norm(x);
      D.vertex_ratio_lo = std::min(D.vertex_ratio_lo, r);
      D.vertex_ratio_hi = std::max(D.vertex_ratio_hi, r);
    }
  }
  return D;
}

}  // namespace kondratiev
