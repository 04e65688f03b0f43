#pragma once

#include <array>
#include <span>
#include <vector>

#include "kondratiev/domain.hpp"
#include "kondratiev/jet.hpp"

namespace kondratiev {

using Point = std::vector<double>;

bool contains(const DomainSpec& dom, std::span<const double> x);

// dist(x, M) for x in the domain (no cap, no membership check)
double distance_to_singular_set(const DomainSpec& dom, std::span<const double> x);

// rho(x) = min(1, dist(x, M)); throws point-outside-domain
double weight(const DomainSpec& dom, std::span<const double> x);

// Smooth surrogate of dist(x, M): the distance itself where it is smooth,
// a soft minimum over edge lines on the polyhedral cone.
double smooth_distance(const DomainSpec& dom, std::span<const double> x);
Jet smooth_distance(const DomainSpec& dom, const Jet* X);

// Regularized weight rho~ = g(smooth distance), g the smooth cap at 1.
double regularized_weight(const DomainSpec& dom, std::span<const double> x);
Jet regularized_weight(const DomainSpec& dom, const Jet* X);

struct StartIndices {
  int j0 = 0;
  int j1 = 0;
  double sup_weight = 1.0;  // sup of rho over the domain
  bool attained = true;     // whether the sup is a maximum
};
StartIndices start_indices(const DomainSpec& dom);

struct Shell {
  int j;
  double inner() const;  // 2^{-j-1}
  double outer() const;  // 2^{-j+1}
};

// { j >= j1 : 2^{-j-1} < rho(x) < 2^{-j+1} }
std::vector<int> shells_of(const DomainSpec& dom, std::span<const double> x);
std::vector<int> shells_of_weight(double w, int j1);

struct PartitionSpec {
  int j1 = 0;
  double epsilon(int j) const;  // margin 2^{-j-4}
  static PartitionSpec for_domain(const DomainSpec& dom);
};

// phi_j as a jet in the point's coordinates (order from the layout)
Jet partition_jet(const PartitionSpec& spec, const DomainSpec& dom, int j, const Jet* X);

struct PartitionValue {
  int order = 0;
  int d = 0;
  std::vector<MultiIndex> alphas;
  std::vector<double> values;  // d^alpha phi_j(x), same order as alphas
  double value() const { return values.front(); }
  double derivative(const MultiIndex& alpha) const;
};
PartitionValue partition_value(const PartitionSpec& spec, const DomainSpec& dom, int j,
                               std::span<const double> x, int order);

// Surface measure of the spherical cap of half-angle gamma on S^{d-1}.
double solid_angle(int d, double gamma);

struct EdgePiece {
  int edge = 0;
  std::array<double, 3> axis{};  // unit direction of M_j
  double gamma = 0;              // opening half-angle of P_j
};

struct ConeDecomposition {
  DomainSpec cone;
  std::vector<EdgePiece> edge_pieces;
  double smooth_factor = 0.75;  // K~ = {x in Q : angle(x, M_j) > smooth_factor * gamma_j for all j}
  // sampled two-sided constants: dist(x,M)/dist(x,M_j) on P_j and dist(x,M)/|x| on K~
  double edge_ratio_lo = 1, edge_ratio_hi = 1;
  double vertex_ratio_lo = 1, vertex_ratio_hi = 1;

  bool in_edge_piece(int k, std::span<const double> x) const;
  bool in_smooth_piece(std::span<const double> x) const;
  int pieces_containing(std::span<const double> x) const;
  // distance used as weight on each piece
  double piece_distance(int piece, std::span<const double> x) const;  // piece = -1 for K~
};

ConeDecomposition decompose_polyhedral_cone(const DomainSpec& q);

// polyhedral cone helpers
std::array<double, 3> edge_direction(const DomainSpec& q, int k);  // unit vector along M_k
double distance_to_segment(std::span<const double> x, const std::array<double, 3>& end);

}  // namespace kondratiev
