#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "kondratiev/errors.hpp"
#include "kondratiev/io.hpp"
#include "kondratiev/verify.hpp"

using namespace kondratiev;

TEST_CASE("registry ids are unique and unknown ids are rejected") {
  const auto& ids = suite_ids();
  CHECK(ids.size() == 14);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  try {
    run_suite("nope", VerifyConfig{});
    FAIL("expected suite-unknown");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SuiteUnknown);
  }
}

TEST_CASE("closed-form suite passes with tight error") {
  auto r = run_suite("closed-form", VerifyConfig{});
  CHECK(r.pass);
  CHECK(r.cases.size() == 10);
  CHECK(r.metrics.at("max_rel_error") < 1e-6);
}

TEST_CASE("decision-consistency covers 10^4 tuples quickly and deterministically") {
  auto a = run_suite("decision-consistency", VerifyConfig{});
  CHECK(a.pass);
  CHECK(a.runtime_s < 10);
  auto b = run_suite("decision-consistency", VerifyConfig{});
  REQUIRE(a.cases.size() == b.cases.size());
  for (size_t i = 0; i < a.cases.size(); ++i) {
    CHECK(a.cases[i].input == b.cases[i].input);
    CHECK(a.cases[i].observed == b.cases[i].observed);
  }
  bool found = false;
  for (const auto& c : a.cases) found = found || c.input.find("10000") != std::string::npos;
  CHECK(found);
}

TEST_CASE("cases are sorted by input and counts add up") {
  for (const char* id : {"closed-form", "decision-consistency", "algebra-sharpness"}) {
    CAPTURE(id);
    auto r = run_suite(id, VerifyConfig{});
    CHECK(std::is_sorted(r.cases.begin(), r.cases.end(),
                         [](const CaseResult& x, const CaseResult& y) { return x.input < y.input; }));
    CHECK(r.passed + r.failed == static_cast<int>(r.cases.size()));
    CHECK(!r.rule.empty());
  }
}

TEST_CASE("algebra sharpness: the a < d/p instance behaves as stated") {
  auto r = run_suite("algebra-sharpness", VerifyConfig{});
  int seen = 0;
  for (const auto& c : r.cases) {
    if (c.input.rfind("stated a=7/5", 0) != 0) continue;
    ++seen;
    CAPTURE(c.input);
    CHECK(c.pass);
  }
  CHECK(seen == 2);
}

TEST_CASE("a different seed changes sampled suites but not exact ones") {
  VerifyConfig c1, c2;
  c2.seed = c1.seed + 1;
  auto a = run_suite("closed-form", c1), b = run_suite("closed-form", c2);
  REQUIRE(a.cases.size() == b.cases.size());
  for (size_t i = 0; i < a.cases.size(); ++i) CHECK(a.cases[i].observed == b.cases[i].observed);
  auto x = run_suite("decision-consistency", c1), y = run_suite("decision-consistency", c2);
  CHECK(x.pass);
  CHECK(y.pass);
}

TEST_CASE("report serialization") {
  auto r = run_suite("closed-form", VerifyConfig{});
  json j = to_json(r);
  CHECK(j["suite"] == "closed-form");
  CHECK(j["cases"].size() == r.cases.size());
  CHECK(j["pass"] == true);
  std::ostringstream os;
  write_cases_csv(os, {r});
  std::string s = os.str();
  CHECK(s.rfind("suite,input,expected,observed,pass\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(r.cases.size()) + 1);
}
