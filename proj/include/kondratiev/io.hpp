#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kondratiev/calculus.hpp"
#include "kondratiev/norms.hpp"
#include "kondratiev/verify.hpp"

namespace kondratiev {

using json = nlohmann::ordered_json;

// Rationals travel as "num/den" strings, exponents as "num/den" or "inf".
json to_json(const SpaceParams& s);
SpaceParams space_from_json(const json& j);
json to_json(const DomainSpec& d);
DomainSpec domain_from_json(const json& j);
json to_json(const QuadSpec& q);
QuadSpec quad_from_json(const json& j);

json to_json(const Verdict& v);
json to_json(const ProductResult& r);
json to_json(const NormResult& r);
json to_json(const SuiteReport& r);

// CSV with columns j,s_j
void write_series_csv(std::ostream& os, const ShellSeries& s);
// one row per case: suite,input,expected,observed,pass
void write_cases_csv(std::ostream& os, const std::vector<SuiteReport>& reports);

// Everything a CLI invocation needs; lossless to and from JSON, unknown keys rejected.
struct CliConfig {
  std::string command;     // decide, member, norm, extremal-norm, verify
  std::string subcommand;  // embed|compact|algebra|product|power, const|rho, suite id or "all"
  std::optional<DomainSpec> domain;
  std::optional<SpaceParams> src, tgt, space, u, v;
  std::optional<int> n;
  std::optional<Rational> b;
  std::string function;
  std::optional<QuadSpec> quad;
  std::optional<std::uint64_t> seed;
  std::string csv;
  bool pretty = false;

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

json to_json(const CliConfig& c);
CliConfig config_from_json(const json& j);

}  // namespace kondratiev
