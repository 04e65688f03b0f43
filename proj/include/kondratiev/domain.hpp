#pragma once

#include <array>
#include <string>
#include <vector>

namespace kondratiev {

enum class DomainKind { ModelCase, SmoothCone, NonsmoothCone, DihedralCube, PolyhedralCone };

const char* kind_name(DomainKind k);       // "ModelCase", ...
DomainKind parse_kind(const std::string&);  // accepts kind names and CLI aliases ("model", "smooth-cone", ...)

using Vertex2 = std::array<double, 2>;

// Model pair (D, M).
//   ModelCase       R^d minus R^l_*, M = {x' = 0}, x' the first d-l coordinates
//   SmoothCone      {x : angle(x, e_d) < gamma, |x| < 1}, M = {0}
//   NonsmoothCone   {angle(x, e_d) < gamma} cut to (0,1)^d, M = segment of the x_d axis
//   DihedralCube    (0,1)^d, M = {x' = 0}
//   PolyhedralCone  d = 3, cone over a convex polygon placed in the plane x_3 = 1,
//                   cut to 0 < x_3 < 1; M = vertex plus the edges through the polygon corners
struct DomainSpec {
  DomainKind kind = DomainKind::ModelCase;
  int d = 3;
  int l = 0;
  double gamma = 0.0;
  std::vector<Vertex2> edges;

  static DomainSpec model(int d, int l);
  static DomainSpec smooth_cone(int d, double gamma);
  static DomainSpec nonsmooth_cone(int d, double gamma);
  static DomainSpec dihedral(int d, int l);
  static DomainSpec polyhedral(std::vector<Vertex2> polygon);

  // throws invalid-params / degenerate-polygon
  void validate() const;

  // dimension of the singular set (0 for the vertex-type cases)
  int singular_dim() const;
  bool bounded() const { return kind != DomainKind::ModelCase; }
  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

// Regular n-gon with circumradius r, centred on the axis, counterclockwise.
std::vector<Vertex2> regular_polygon(int n, double r, double phase = 0.0);
// Polygon with vertices at polar angles phi_k and radius r.
std::vector<Vertex2> polygon_from_angles(const std::vector<double>& phi, double r);

}  // namespace kondratiev
