#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kondratiev/norms.hpp"

namespace kondratiev {

struct CaseResult {
  std::string input;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::string rule;  // what the suite-level pass means
  std::vector<CaseResult> cases;  // sorted by input
  std::map<std::string, double> metrics;
  int passed = 0;
  int failed = 0;
  bool pass = false;
  double runtime_s = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 20240917;
  QuadSpec quad;
  int oracle_samples = 50;
  int oracle_jmax = 36;
};

const std::vector<std::string>& suite_ids();
// throws suite-unknown; numerical failures inside a suite are recorded per case
SuiteReport run_suite(const std::string& id, const VerifyConfig& cfg);
std::vector<SuiteReport> run_all(const VerifyConfig& cfg);

// Empirical constants, measured once on the fixed families and frozen with 2x headroom
// (upper bounds doubled, lower bounds halved). Measured: extremal 1.0376, localization
// [0.9186, 13.58], isomorphism [0.9687, 1.2146], partition gradient 8.22, Moser 0.6658,
// multiplier 0.2611, damped multiplier 7.78e-4, decomposition [1, 2.9135].
namespace frozen {
inline constexpr double kExtremalRatio = 2.08;     // full / extremal
inline constexpr double kLocalizationLo = 0.45;    // sum_j ||phi_j u||^p / ||u||^p
inline constexpr double kLocalizationHi = 27.2;
inline constexpr double kIsomorphismLo = 0.48;     // ||rho~^b u||_{a+b} / ||u||_a
inline constexpr double kIsomorphismHi = 2.43;
inline constexpr double kMoser = 1.34;
inline constexpr double kMultiplier = 0.53;         // K^m_{0,inf} multipliers
inline constexpr double kDampedMultiplier = 1.6e-3; // K^{m+n}_{a+n,p} multipliers
inline constexpr double kDecompositionLo = 0.5;     // sum over pieces / whole
inline constexpr double kDecompositionHi = 5.83;
inline constexpr double kPartitionGradient = 2 * 8.3;
}  // namespace frozen

}  // namespace kondratiev
