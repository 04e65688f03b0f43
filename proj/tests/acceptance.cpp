// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kondratiev/verify.hpp"

using namespace kondratiev;

namespace {

struct Criterion {
  int id;
  const char* what;
  const char* suite;
  double max_runtime_s;  // 0: no limit
  std::function<std::string(const SuiteReport&)> detail;
};

std::string failing(const SuiteReport& r, size_t limit = 3) {
  std::string s;
  size_t n = 0;
  for (const auto& c : r.cases)
    if (!c.pass && n++ < limit) s += "; [" + c.input + "] expected " + c.expected + ", got " + c.observed;
  if (n > limit) s += "; ... " + std::to_string(n - limit) + " more";
  return s;
}

std::string metric(const SuiteReport& r, const std::string& k) {
  auto it = r.metrics.find(k);
  if (it == r.metrics.end()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", it->second);
  return buf;
}

}  // namespace

int main() {
  VerifyConfig cfg;  // the oracle suite runs at jMax = cfg.oracle_jmax = 36

  const std::vector<Criterion> crit = {
      {1, "homogeneity identity, rel err < 1e-6", "homogeneity", 60,
       [](const SuiteReport& r) { return "max rel err " + metric(r, "max_rel_error"); }},
      {2, "membership oracle, agreement >= 96%, thresholds Borderline", "oracle", 300,
       [](const SuiteReport& r) { return "agreement " + metric(r, "agreement"); }},
      {3, "closed-form cone norm to 1e-6", "closed-form", 0,
       [](const SuiteReport& r) { return "max rel err " + metric(r, "max_rel_error"); }},
      {4, "extremal-norm equivalence within frozen C", "equivalent-norm", 0,
       [](const SuiteReport& r) {
         return "max full/extremal " + metric(r, "max_ratio") + " (C = " + std::to_string(frozen::kExtremalRatio) + ")";
       }},
      {5, "partition of unity and localization", "partition", 0,
       [](const SuiteReport& r) {
         return "sum err " + metric(r, "max_sum_error") + ", localization [" + metric(r, "localization_min") + ", " +
                metric(r, "localization_max") + "]";
       }},
      {6, "algebra sharpness at the stated instances", "algebra-sharpness", 0, nullptr},
      {7, "decision-engine consistency over 10^4 tuples", "decision-consistency", 10, nullptr},
      {8, "non-compactness witnesses on the equality line", "noncompact-witness", 0, nullptr},
      {9, "product-estimate uniformity and hypothesis relevance", "product-uniformity", 0, nullptr},
  };

  int failed = 0;
  for (const auto& c : crit) {
    SuiteReport r = run_suite(c.suite, cfg);
    const bool in_time = c.max_runtime_s == 0 || r.runtime_s < c.max_runtime_s;
    const bool ok = r.pass && in_time;
    failed += !ok;
    std::string detail = std::to_string(r.passed) + "/" + std::to_string(r.passed + r.failed) + " cases";
    if (c.detail) detail += ", " + c.detail(r);
    char t[48];
    std::snprintf(t, sizeof t, ", %.1fs", r.runtime_s);
    detail += t;
    if (c.max_runtime_s > 0) {
      std::snprintf(t, sizeof t, " (limit %.0fs)", c.max_runtime_s);
      detail += t;
    }
    if (!ok) detail += failing(r);
    std::printf("%s criterion %d [%s] %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.suite, c.what, detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
