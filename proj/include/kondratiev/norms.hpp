#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kondratiev/calculus.hpp"
#include "kondratiev/domain.hpp"
#include "kondratiev/testfuncs.hpp"

namespace kondratiev {

// Tensor quadrature settings. Every 1-D panel is a Gauss-Kronrod pair (angular_order
// Kronrod points); the difference to the embedded Gauss rule is the error estimate.
struct QuadSpec {
  int radial_panels = 1;
  int angular_order = 15;  // 15, 21, 31, 41, 51 or 61
  int j_max = 40;
  double target_rel_error = 1e-6;
  int max_refine = 2;  // panel doublings allowed per shell

  void validate() const;
  // "fast", "default", "accurate"
  static QuadSpec profile(const std::string& name);
  // profile named by KONDRATIEV_QUAD_PROFILE, "default" when unset
  static QuadSpec from_env();
  friend bool operator==(const QuadSpec&, const QuadSpec&) = default;
};

inline constexpr const char* kQuadProfileEnv = "KONDRATIEV_QUAD_PROFILE";

// Detector band in log2 units per shell.
inline constexpr double kSlopeBand = 0.01;
inline constexpr int kSlopeWindow = 15;

struct ShellSeries {
  int j1 = 0;
  int j_max = 0;
  std::vector<double> s;                   // s[j - j1]; p-th power contribution, or the shell sup for p = inf
  std::vector<std::vector<double>> order;  // order[j - j1][k]: part of s from |alpha| = k
  std::vector<double> err;                 // per-shell estimate |fine - coarse|
  double total = 0;                        // sum (or max) of s
  double tail = 0;                         // geometric extrapolation beyond j_max (0 if not converged)
  std::optional<double> tail_slope;        // empty when the tail vanishes identically
  bool converged = false;

  double at(int j) const { return s[j - j1]; }
};

struct NormResult {
  double value = 0;  // +inf when not converged
  ShellSeries series;
  double est_rel_error = 0;
  bool lower_bound = false;  // p = inf: max over quadrature nodes
};

NormResult kondratiev_norm(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                           const QuadSpec& quad);
// only the |alpha| = 0 and |alpha| = m terms, combined in l^p
NormResult extremal_norm(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                         const QuadSpec& quad);

struct NormPair {
  NormResult full, extremal;
};
// both from one quadrature pass; with check set a quadrature-failure is thrown when the
// estimated error exceeds 10 x target_rel_error
NormPair norm_pair(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom, const QuadSpec& quad,
                   bool check = true);

enum class Membership { Convergent, Divergent, Borderline };
const char* membership_name(Membership m);

Membership classify_slope(std::optional<double> slope, bool p_infinite, double band = kSlopeBand);
// The detector only needs ratios of neighbouring shells: no refinement, per-shell target 1e-4.
QuadSpec detection_quad(const QuadSpec& quad);
Membership membership_detect(const TestFunction& tf, const SpaceParams& sp, const DomainSpec& dom,
                             const QuadSpec& quad);

// least-squares slope of log2 s_j over the last window shells with s_j > 0
std::optional<double> tail_slope(const std::vector<double>& s, int window = kSlopeWindow);

}  // namespace kondratiev
