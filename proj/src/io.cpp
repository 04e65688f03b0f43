#include "kondratiev/io.hpp"

#include <cmath>
#include <ostream>
#include <set>

#include "kondratiev/errors.hpp"

namespace kondratiev {

namespace {

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) fail(ErrorCode::InvalidParams, std::string(what) + " must be a JSON object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) fail(ErrorCode::InvalidParams, "unknown key '" + k + "' in " + what);
}

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) fail(ErrorCode::InvalidParams, std::string("missing key '") + key + "' in " + what);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidParams, std::string("bad value for '") + key + "' in " + what);
  }
}

// rationals may also be given as JSON numbers; those convert through their decimal text
Rational rational_of(const json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  fail(ErrorCode::InvalidParams, std::string("expected a rational for ") + what);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const SpaceParams& s) {
  return json{{"m", s.m}, {"a", to_string(s.a)}, {"p", s.p.str()}};
}

SpaceParams space_from_json(const json& j) {
  if (j.is_string()) return parse_space(j.get<std::string>());
  only_keys(j, {"m", "a", "p", "q"}, "space");
  SpaceParams s;
  s.m = get<int>(j, "m", "space");
  if (!j.contains("a")) fail(ErrorCode::InvalidParams, "missing key 'a' in space");
  s.a = rational_of(j["a"], "a");
  const json& p = j.contains("p") ? j["p"] : j.contains("q") ? j["q"] : json();
  if (p.is_null()) fail(ErrorCode::InvalidParams, "missing key 'p' in space");
  s.p = p.is_string() ? Exponent::parse(p.get<std::string>()) : Exponent(rational_of(p, "p"));
  s.validate();
  return s;
}

json to_json(const DomainSpec& d) {
  json j{{"kind", kind_name(d.kind)}, {"d", d.d}};
  switch (d.kind) {
    case DomainKind::ModelCase:
    case DomainKind::DihedralCube: j["l"] = d.l; break;
    case DomainKind::SmoothCone:
    case DomainKind::NonsmoothCone: j["gamma"] = d.gamma; break;
    case DomainKind::PolyhedralCone: {
      json e = json::array();
      for (const auto& v : d.edges) e.push_back({v[0], v[1]});
      j["edges"] = e;
      break;
    }
  }
  return j;
}

DomainSpec domain_from_json(const json& j) {
  only_keys(j, {"kind", "d", "l", "gamma", "edges"}, "domain");
  DomainSpec d;
  d.kind = parse_kind(get<std::string>(j, "kind", "domain"));
  d.d = j.contains("d") ? get<int>(j, "d", "domain") : 3;
  switch (d.kind) {
    case DomainKind::ModelCase: d.l = j.contains("l") ? get<int>(j, "l", "domain") : 0; break;
    case DomainKind::DihedralCube: d.l = j.contains("l") ? get<int>(j, "l", "domain") : 1; break;
    case DomainKind::SmoothCone:
    case DomainKind::NonsmoothCone:
      d.gamma = get<double>(j, "gamma", "domain");
      if (d.kind == DomainKind::NonsmoothCone) d.l = 1;
      break;
    case DomainKind::PolyhedralCone:
      for (const auto& e : get<json>(j, "edges", "domain")) {
        if (!e.is_array() || e.size() != 2) fail(ErrorCode::InvalidParams, "edges must be [x, y] pairs");
        d.edges.push_back({e[0].get<double>(), e[1].get<double>()});
      }
      break;
  }
  d.validate();
  return d;
}

json to_json(const QuadSpec& q) {
  return json{{"radialPanels", q.radial_panels},
              {"angularOrder", q.angular_order},
              {"jMax", q.j_max},
              {"targetRelError", q.target_rel_error},
              {"maxRefine", q.max_refine}};
}

QuadSpec quad_from_json(const json& j) {
  only_keys(j, {"radialPanels", "angularOrder", "jMax", "targetRelError", "maxRefine", "profile"}, "quad");
  QuadSpec q = j.contains("profile") ? QuadSpec::profile(get<std::string>(j, "profile", "quad")) : QuadSpec{};
  if (j.contains("radialPanels")) q.radial_panels = get<int>(j, "radialPanels", "quad");
  if (j.contains("angularOrder")) q.angular_order = get<int>(j, "angularOrder", "quad");
  if (j.contains("jMax")) q.j_max = get<int>(j, "jMax", "quad");
  if (j.contains("targetRelError")) q.target_rel_error = get<double>(j, "targetRelError", "quad");
  if (j.contains("maxRefine")) q.max_refine = get<int>(j, "maxRefine", "quad");
  q.validate();
  return q;
}

json to_json(const Verdict& v) {
  json j{{"outcome", outcome_name(v.outcome)}, {"rule", v.rule}, {"citation", v.citation}, {"reason", v.reason}};
  if (v.target) {
    json t = to_json(v.target->space);
    if (v.target->a_open) t["aOpen"] = true;
    j["target"] = t;
  }
  return j;
}

json to_json(const ProductResult& r) {
  json list = json::array();
  for (const auto& e : r.applicable) {
    json t = to_json(e.target.space);
    if (e.target.a_open) t["aOpen"] = true;
    json hs = json::array();
    for (const auto& h : e.hypotheses) hs.push_back({{"check", h.str()}, {"holds", h.holds()}});
    json x{{"rule", e.rule}, {"citation", e.citation}, {"target", t}, {"hypotheses", hs}};
    if (e.conditional()) x["sideCondition"] = e.side_condition;
    list.push_back(x);
  }
  json j{{"applicable", list}};
  j["best"] = r.best ? json(r.applicable[*r.best].rule) : json(nullptr);
  if (r.best) j["bestIndex"] = *r.best;
  return j;
}

json to_json(const NormResult& r) {
  const ShellSeries& S = r.series;
  json s = json::array();
  for (double v : S.s) s.push_back(v);
  json series{{"j1", S.j1},
              {"jMax", S.j_max},
              {"total", S.total},
              {"tail", S.tail},
              {"tailSlope", S.tail_slope ? json(*S.tail_slope) : json(nullptr)},
              {"converged", S.converged},
              {"s", s}};
  return json{{"value", number_or_null(r.value)},
              {"converged", S.converged},
              {"estRelError", r.est_rel_error},
              {"lowerBound", r.lower_bound},
              {"series", series}};
}

json to_json(const SuiteReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"input", c.input}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}});
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number_or_null(v);
  return json{{"suite", r.suite}, {"rule", r.rule},   {"pass", r.pass},       {"passed", r.passed},
              {"failed", r.failed}, {"runtime", r.runtime_s}, {"metrics", metrics}, {"cases", cases}};
}

void write_series_csv(std::ostream& os, const ShellSeries& s) {
  os << "j,s_j\n";
  char buf[64];
  for (size_t i = 0; i < s.s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.s[i]);
    os << s.j1 + static_cast<int>(i) << ',' << buf << '\n';
  }
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace

void write_cases_csv(std::ostream& os, const std::vector<SuiteReport>& reports) {
  os << "suite,input,expected,observed,pass\n";
  for (const auto& r : reports)
    for (const auto& c : r.cases)
      os << csv_field(r.suite) << ',' << csv_field(c.input) << ',' << csv_field(c.expected) << ','
         << csv_field(c.observed) << ',' << (c.pass ? "true" : "false") << '\n';
}

json to_json(const CliConfig& c) {
  json j{{"command", c.command}};
  if (!c.subcommand.empty()) j["subcommand"] = c.subcommand;
  if (c.domain) j["domain"] = to_json(*c.domain);
  if (c.src) j["src"] = to_json(*c.src);
  if (c.tgt) j["tgt"] = to_json(*c.tgt);
  if (c.space) j["space"] = to_json(*c.space);
  if (c.u) j["u"] = to_json(*c.u);
  if (c.v) j["v"] = to_json(*c.v);
  if (c.n) j["n"] = *c.n;
  if (c.b) j["b"] = to_string(*c.b);
  if (!c.function.empty()) j["function"] = c.function;
  if (c.quad) j["quad"] = to_json(*c.quad);
  if (c.seed) j["seed"] = *c.seed;
  if (!c.csv.empty()) j["csv"] = c.csv;
  if (c.pretty) j["pretty"] = true;
  return j;
}

CliConfig config_from_json(const json& j) {
  only_keys(j,
            {"command", "subcommand", "domain", "src", "tgt", "space", "u", "v", "n", "b", "function", "quad", "seed",
             "csv", "pretty"},
            "config");
  CliConfig c;
  c.command = get<std::string>(j, "command", "config");
  if (j.contains("subcommand")) c.subcommand = get<std::string>(j, "subcommand", "config");
  if (j.contains("domain")) c.domain = domain_from_json(j["domain"]);
  if (j.contains("src")) c.src = space_from_json(j["src"]);
  if (j.contains("tgt")) c.tgt = space_from_json(j["tgt"]);
  if (j.contains("space")) c.space = space_from_json(j["space"]);
  if (j.contains("u")) c.u = space_from_json(j["u"]);
  if (j.contains("v")) c.v = space_from_json(j["v"]);
  if (j.contains("n")) c.n = get<int>(j, "n", "config");
  if (j.contains("b")) c.b = rational_of(j["b"], "b");
  if (j.contains("function")) c.function = get<std::string>(j, "function", "config");
  if (j.contains("quad")) c.quad = quad_from_json(j["quad"]);
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config");
  if (j.contains("csv")) c.csv = get<std::string>(j, "csv", "config");
  if (j.contains("pretty")) c.pretty = get<bool>(j, "pretty", "config");
  return c;
}

}  // namespace kondratiev
