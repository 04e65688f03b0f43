#include "kondratiev/domain.hpp"

#include <cmath>
#include <numbers>

#include "kondratiev/errors.hpp"

namespace kondratiev {

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::ModelCase: return "ModelCase";
    case DomainKind::SmoothCone: return "SmoothCone";
    case DomainKind::NonsmoothCone: return "NonsmoothCone";
    case DomainKind::DihedralCube: return "DihedralCube";
    case DomainKind::PolyhedralCone: return "PolyhedralCone";
  }
  return "?";
}

DomainKind parse_kind(const std::string& s) {
  if (s == "ModelCase" || s == "model") return DomainKind::ModelCase;
  if (s == "SmoothCone" || s == "smooth-cone") return DomainKind::SmoothCone;
  if (s == "NonsmoothCone" || s == "nonsmooth-cone") return DomainKind::NonsmoothCone;
  if (s == "DihedralCube" || s == "dihedral") return DomainKind::DihedralCube;
  if (s == "PolyhedralCone" || s == "polyhedral") return DomainKind::PolyhedralCone;
  fail(ErrorCode::InvalidParams, "unknown domain kind '" + s + "'");
}

DomainSpec DomainSpec::model(int d, int l) {
  DomainSpec s;
  s.kind = DomainKind::ModelCase;
  s.d = d;
  s.l = l;
  return s;
}

DomainSpec DomainSpec::smooth_cone(int d, double gamma) {
  DomainSpec s;
  s.kind = DomainKind::SmoothCone;
  s.d = d;
  s.gamma = gamma;
  return s;
}

DomainSpec DomainSpec::nonsmooth_cone(int d, double gamma) {
  DomainSpec s;
  s.kind = DomainKind::NonsmoothCone;
  s.d = d;
  s.l = 1;
  s.gamma = gamma;
  return s;
}

DomainSpec DomainSpec::dihedral(int d, int l) {
  DomainSpec s;
  s.kind = DomainKind::DihedralCube;
  s.d = d;
  s.l = l;
  return s;
}

DomainSpec DomainSpec::polyhedral(std::vector<Vertex2> polygon) {
  DomainSpec s;
  s.kind = DomainKind::PolyhedralCone;
  s.d = 3;
  s.edges = std::move(polygon);
  return s;
}

int DomainSpec::singular_dim() const {
  switch (kind) {
    case DomainKind::ModelCase:
    case DomainKind::DihedralCube: return l;
    case DomainKind::NonsmoothCone: return 1;
    case DomainKind::PolyhedralCone: return 1;
    case DomainKind::SmoothCone: return 0;
  }
  return 0;
}

void DomainSpec::validate() const {
  if (d < 2) fail(ErrorCode::InvalidParams, "dimension d must be >= 2");
  switch (kind) {
    case DomainKind::ModelCase:
      if (l < 0 || l >= d) fail(ErrorCode::InvalidParams, "ModelCase needs 0 <= l < d");
      break;
    case DomainKind::DihedralCube:
      if (l < 1 || l >= d) fail(ErrorCode::InvalidParams, "DihedralCube needs 1 <= l < d");
      break;
    case DomainKind::SmoothCone:
    case DomainKind::NonsmoothCone:
      if (!(gamma > 0 && gamma < std::numbers::pi))
        fail(ErrorCode::InvalidParams, "opening angle gamma must lie in (0, pi)");
      break;
    case DomainKind::PolyhedralCone: {
      if (d != 3) fail(ErrorCode::InvalidParams, "PolyhedralCone requires d = 3");
      size_t n = edges.size();
      if (n < 3) fail(ErrorCode::InvalidParams, "PolyhedralCone needs at least 3 edges");
      for (size_t k = 0; k < n; ++k) {
        const auto& a = edges[k];
        const auto& b = edges[(k + 1) % n];
        const auto& c = edges[(k + 2) % n];
        double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        double scale = std::hypot(b[0] - a[0], b[1] - a[1]) * std::hypot(c[0] - b[0], c[1] - b[1]);
        if (!(cross > 1e-12 * scale) || scale == 0)
          fail(ErrorCode::DegeneratePolygon,
               "polygon must be strictly convex and counterclockwise (corner " + std::to_string(k + 1) + ")");
      }
      break;
    }
  }
}

std::vector<Vertex2> regular_polygon(int n, double r, double phase) {
  std::vector<Vertex2> v;
  for (int k = 0; k < n; ++k) {
    double t = phase + 2 * std::numbers::pi * k / n;
    v.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return v;
}

std::vector<Vertex2> polygon_from_angles(const std::vector<double>& phi, double r) {
  std::vector<Vertex2> v;
  for (double t : phi) v.push_back({r * std::cos(t), r * std::sin(t)});
  return v;
}

}  // namespace kondratiev
