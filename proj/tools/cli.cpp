#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kondratiev/errors.hpp"
#include "kondratiev/io.hpp"
#include "kondratiev/norms.hpp"
#include "kondratiev/verify.hpp"

namespace kondratiev {

namespace {

// Raw flag values; presence is checked through the option objects.
struct Flags {
  std::string config;
  bool emit_config = false;

  std::string domain;
  int d = 3, l = 0, ngon = 0;
  double gamma = 0, radius = 0.5;
  std::string edges;

  std::string src, tgt, space, u, v;
  int m = 0;
  std::string a, p;
  int n = 0;
  std::string b;
  std::string func;

  std::string profile;
  int jmax = 0, panels = 0, order = 0, refine = 0;
  double target = 0;

  std::uint64_t seed = 0;
  std::string csv;
  bool pretty = false;
  std::string suite = "all";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// re-throws library errors with the offending flag in front
template <class F>
auto for_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), flag + ": " + e.what());
  }
}

std::vector<Vertex2> parse_edges(const std::string& text) {
  std::vector<Vertex2> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    double x = 0, y = 0;
    char comma = 0;
    std::istringstream is(item);
    if (!(is >> x >> comma >> y) || comma != ',' || !(is >> std::ws).eof())
      fail(ErrorCode::InvalidParams, "expected \"x,y;x,y;...\", got '" + item + "'");
    out.push_back({x, y});
  }
  return out;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Kondratiev space calculus and numerical verification", "kondratiev"};
  Flags f_;
  std::map<std::string, CLI::Option*> opt_;

  bool given(const std::string& name) const { return opt_.at(name)->count() > 0; }
  void setup();
  CliConfig assemble(const std::string& command, const std::string& sub);
  void require(bool ok, const std::string& flag, const CliConfig& c) const;
  int execute(const CliConfig& c);
  void emit(const json& j) const { out_ << j.dump(2) << '\n'; }
};

void Runner::setup() {
  app_.set_version_flag("--version", "0.1.0");
  app_.require_subcommand(0, 1);
  auto add = [&](const std::string& name, auto& var, const std::string& help) {
    opt_[name] = app_.add_option(name, var, help);
  };
  add("--config", f_.config, "read a JSON config (flags given on the command line override it)");
  opt_["--emit-config"] = app_.add_flag("--emit-config", f_.emit_config, "print the effective JSON config and exit");

  add("--domain", f_.domain, "model | smooth-cone | nonsmooth-cone | dihedral | polyhedral");
  add("--d", f_.d, "ambient dimension");
  add("--l", f_.l, "dimension of the singular edge (model, dihedral)");
  add("--gamma", f_.gamma, "cone opening angle in radians");
  add("--edges", f_.edges, "polygon corners \"x,y;x,y;...\" in the plane x3 = 1 (polyhedral)");
  add("--ngon", f_.ngon, "regular n-gon cross-section (polyhedral)");
  add("--radius", f_.radius, "circumradius for --ngon");

  add("--src", f_.src, "source space as m=..,a=..,p=..");
  add("--tgt", f_.tgt, "target space (q accepted for p)");
  add("--space", f_.space, "space for algebra, power, member, norm");
  add("--u", f_.u, "space of the first factor");
  add("--v", f_.v, "space of the second factor");
  add("--m", f_.m, "smoothness order");
  add("--a", f_.a, "weight exponent (rational or exact decimal)");
  add("--p", f_.p, "integrability exponent, or inf");
  add("--n", f_.n, "power for decide power");
  add("--b", f_.b, "exponent of rho for member rho");
  add("--func", f_.func, "test function expression");

  add("--profile", f_.profile, "quadrature profile: fast | default | accurate");
  add("--jmax", f_.jmax, "last dyadic shell");
  add("--panels", f_.panels, "radial panels per shell");
  add("--order", f_.order, "Kronrod points per panel (15, 21, 31, 41, 51, 61)");
  add("--target", f_.target, "target relative error");
  add("--refine", f_.refine, "panel doublings allowed per shell");

  add("--seed", f_.seed, "seed for randomized suites");
  add("--csv", f_.csv, "also write CSV (shell series, or verify cases)");
  opt_["--pretty"] = app_.add_flag("--pretty", f_.pretty, "human-readable tables instead of JSON");

  auto* decide = app_.add_subcommand("decide", "exact parameter calculus")->fallthrough()->require_subcommand(1);
  for (const char* s : {"embed", "compact", "algebra", "product", "power"}) decide->add_subcommand(s)->fallthrough();
  auto* member = app_.add_subcommand("member", "membership lemmas")->fallthrough()->require_subcommand(1);
  for (const char* s : {"const", "rho"}) member->add_subcommand(s)->fallthrough();
  app_.add_subcommand("norm", "Kondratiev norm by dyadic quadrature")->fallthrough();
  app_.add_subcommand("extremal-norm", "order-0 plus order-m norm")->fallthrough();
  auto* verify = app_.add_subcommand("verify", "run verification suites")->fallthrough();
  verify->add_option("suite", f_.suite, "suite id or all");
}

SpaceParams space_flag(const std::string& flag, const std::string& text) {
  return for_flag(flag, [&] { return parse_space(text); });
}

CliConfig Runner::assemble(const std::string& command, const std::string& sub) {
  CliConfig c;
  if (given("--config")) {
    std::ifstream in(f_.config);
    if (!in) throw UsageError("--config: cannot read '" + f_.config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    c = for_flag("--config", [&] { return config_from_json(j); });
  }
  if (!command.empty()) {
    c.command = command;
    c.subcommand = sub;
  }
  if (c.command.empty()) throw UsageError("no command given (decide, member, norm, extremal-norm, verify)");
  if (c.command == "verify" && (command == "verify" || c.subcommand.empty())) c.subcommand = f_.suite;

  // domain
  const bool any_domain = given("--domain") || given("--d") || given("--l") || given("--gamma") ||
                          given("--edges") || given("--ngon");
  if (c.command != "verify" && (any_domain || !c.domain)) {
    DomainSpec dom = c.domain.value_or(DomainSpec::model(3, 0));
    if (given("--domain")) {
      dom.kind = for_flag("--domain", [&] { return parse_kind(f_.domain); });
      if (dom.kind == DomainKind::DihedralCube && !given("--l")) dom.l = 1;
      if (dom.kind == DomainKind::ModelCase && !given("--l")) dom.l = 0;
      if (dom.kind == DomainKind::NonsmoothCone) dom.l = 1;
      if (dom.kind == DomainKind::PolyhedralCone) dom.d = 3;
    }
    if (given("--d")) dom.d = f_.d;
    if (given("--l")) dom.l = f_.l;
    if (given("--gamma")) dom.gamma = f_.gamma;
    if (given("--edges")) dom.edges = for_flag("--edges", [&] { return parse_edges(f_.edges); });
    if (given("--ngon")) {
      if (f_.ngon < 3) throw UsageError("--ngon: need at least 3 corners");
      dom.edges = regular_polygon(f_.ngon, f_.radius);
    }
    if (dom.kind != DomainKind::ModelCase && dom.kind != DomainKind::DihedralCube) {
      if (dom.kind != DomainKind::NonsmoothCone) dom.l = 0;
    }
    if (dom.kind != DomainKind::SmoothCone && dom.kind != DomainKind::NonsmoothCone) dom.gamma = 0;
    if (dom.kind != DomainKind::PolyhedralCone) dom.edges.clear();
    for_flag("--domain", [&] { dom.validate(); });
    c.domain = dom;
  }

  if (given("--src")) c.src = space_flag("--src", f_.src);
  if (given("--tgt")) c.tgt = space_flag("--tgt", f_.tgt);
  if (given("--space")) c.space = space_flag("--space", f_.space);
  if (given("--u")) c.u = space_flag("--u", f_.u);
  if (given("--v")) c.v = space_flag("--v", f_.v);
  if (given("--m") || given("--a") || given("--p")) {
    if (given("--space")) throw UsageError("--m/--a/--p: use either --space or --m --a --p");
    SpaceParams s = c.space.value_or(SpaceParams{});
    if (given("--m")) s.m = f_.m;
    if (given("--a")) s.a = for_flag("--a", [&] { return parse_rational(f_.a); });
    if (given("--p")) {
      s.p = for_flag("--p", [&] { return Exponent::parse(f_.p); });
    } else if (!c.space) {
      throw UsageError("--p is required with --m/--a");
    }
    if (!c.space && !given("--a")) throw UsageError("--a is required with --m/--p");
    for_flag("--m/--a/--p", [&] { s.validate(); });
    c.space = s;
  }
  if (given("--n")) c.n = f_.n;
  if (given("--b")) c.b = for_flag("--b", [&] { return parse_rational(f_.b); });
  if (given("--func")) c.function = f_.func;

  const bool numeric = c.command == "norm" || c.command == "extremal-norm" || c.command == "verify";
  const bool any_quad = given("--profile") || given("--jmax") || given("--panels") || given("--order") ||
                        given("--target") || given("--refine");
  if (numeric || any_quad) {
    QuadSpec q = c.quad ? *c.quad : for_flag(kQuadProfileEnv, [] { return QuadSpec::from_env(); });
    if (given("--profile")) q = for_flag("--profile", [&] { return QuadSpec::profile(f_.profile); });
    if (given("--jmax")) q.j_max = f_.jmax;
    if (given("--panels")) q.radial_panels = f_.panels;
    if (given("--order")) q.angular_order = f_.order;
    if (given("--target")) q.target_rel_error = f_.target;
    if (given("--refine")) q.max_refine = f_.refine;
    for_flag("--profile/--jmax/--panels/--order/--target/--refine", [&] { q.validate(); });
    c.quad = q;
  }
  if (given("--seed")) c.seed = f_.seed;
  if (given("--csv")) c.csv = f_.csv;
  if (given("--pretty")) c.pretty = f_.pretty;
  return c;
}

void Runner::require(bool ok, const std::string& flag, const CliConfig& c) const {
  if (!ok) {
    std::string cmd = c.command + (c.subcommand.empty() ? "" : " " + c.subcommand);
    throw UsageError(flag + " is required for " + cmd);
  }
}

// --- pretty printers --------------------------------------------------------

std::string short_rat(const Rational& r) {
  std::string t = to_string(r);
  return is_integer(r) ? t.substr(0, t.find('/')) : t;
}

std::string space_text(const SpaceParams& s) {
  return "K^" + std::to_string(s.m) + "_{" + short_rat(s.a) + "," +
         (s.p.is_infinite() ? std::string("inf") : short_rat(s.p.value())) + "}";
}

void pretty_verdict(std::ostream& os, const Verdict& v) {
  os << std::left << std::setw(10) << "outcome" << outcome_name(v.outcome) << '\n'
     << std::setw(10) << "rule" << v.rule << '\n'
     << std::setw(10) << "citation" << v.citation << '\n'
     << std::setw(10) << "reason" << v.reason << '\n';
  if (v.target)
    os << std::setw(10) << "target" << space_text(v.target->space) << (v.target->a_open ? " (a not attained)" : "")
       << '\n';
}

void pretty_product(std::ostream& os, const ProductResult& r) {
  if (r.applicable.empty()) {
    os << "no product rule applies\n";
    return;
  }
  for (size_t i = 0; i < r.applicable.size(); ++i) {
    const auto& e = r.applicable[i];
    os << (r.best && *r.best == i ? "* " : "  ") << std::left << std::setw(12) << e.rule
       << space_text(e.target.space) << (e.target.a_open ? " (a not attained)" : "") << "   " << e.citation << '\n';
    for (const auto& h : e.hypotheses) os << "      " << (h.holds() ? "ok  " : "FAIL") << ' ' << h.str() << '\n';
    if (e.conditional()) os << "      needs: " << e.side_condition << '\n';
  }
}

void pretty_norm(std::ostream& os, const NormResult& r, const std::string& what) {
  const auto& S = r.series;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-14s%.12g\n", what.c_str(), r.value);
  os << buf;
  os << std::left << std::setw(14) << "converged" << (S.converged ? "yes" : "no") << '\n';
  std::snprintf(buf, sizeof buf, "%-14s%.3g\n", "est rel error", r.est_rel_error);
  os << buf;
  if (S.tail_slope) {
    std::snprintf(buf, sizeof buf, "%-14s%.6f\n", "tail slope", *S.tail_slope);
    os << buf;
  }
  os << "\n   j   s_j\n";
  for (size_t i = 0; i < S.s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%4d   %.6e\n", S.j1 + static_cast<int>(i), S.s[i]);
    os << buf;
  }
}

void pretty_verify(std::ostream& os, const std::vector<SuiteReport>& reps, bool all_pass) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %-5s %11s %9s\n", "suite", "pass", "cases", "time[s]");
  os << buf;
  for (const auto& r : reps) {
    std::snprintf(buf, sizeof buf, "%-22s %-5s %5d/%-5d %9.1f\n", r.suite.c_str(), r.pass ? "yes" : "NO", r.passed,
                  r.passed + r.failed, r.runtime_s);
    os << buf;
  }
  for (const auto& r : reps)
    for (const auto& c : r.cases)
      if (!c.pass) os << "  [" << r.suite << "] " << c.input << "\n      expected " << c.expected << "\n      observed " << c.observed << '\n';
  os << (all_pass ? "all suites pass\n" : "some suites FAIL\n");
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("--csv: cannot write '" + path + "'");
  return f;
}

int Runner::execute(const CliConfig& c) {
  const std::string& cmd = c.command;
  const std::string& sub = c.subcommand;
  if (!c.csv.empty() && cmd != "norm" && cmd != "extremal-norm" && cmd != "verify")
    throw UsageError("--csv is only available for norm, extremal-norm and verify");

  if (cmd == "decide" || cmd == "member") {
    const DomainSpec& dom = *c.domain;
    json out;
    if (cmd == "decide" && (sub == "embed" || sub == "compact")) {
      require(c.src.has_value(), "--src", c);
      require(c.tgt.has_value(), "--tgt", c);
      Verdict v = sub == "embed" ? embed_continuous(*c.src, *c.tgt, dom) : embed_compact(*c.src, *c.tgt, dom);
      if (c.pretty) return pretty_verdict(out_, v), kExitOk;
      out = to_json(v);
    } else if (cmd == "decide" && sub == "algebra") {
      require(c.space.has_value(), "--space", c);
      Verdict v = is_algebra(*c.space, dom);
      if (c.pretty) return pretty_verdict(out_, v), kExitOk;
      out = to_json(v);
    } else if (cmd == "decide" && sub == "product") {
      require(c.u.has_value(), "--u", c);
      require(c.v.has_value(), "--v", c);
      ProductResult r = product_target(*c.u, *c.v, dom);
      if (c.pretty) return pretty_product(out_, r), kExitOk;
      out = to_json(r);
    } else if (cmd == "decide" && sub == "power") {
      require(c.space.has_value(), "--space", c);
      require(c.n.has_value(), "--n", c);
      ProductResult r = power_target(*c.space, *c.n, dom);
      if (c.pretty) return pretty_product(out_, r), kExitOk;
      out = to_json(r);
    } else if (cmd == "member" && sub == "const") {
      require(c.space.has_value(), "--space", c);
      Verdict v = member_constant(*c.space, dom);
      if (c.pretty) return pretty_verdict(out_, v), kExitOk;
      out = to_json(v);
    } else if (cmd == "member" && sub == "rho") {
      require(c.space.has_value(), "--space", c);
      require(c.b.has_value(), "--b", c);
      Verdict v = member_rho_power(*c.b, *c.space, dom);
      if (c.pretty) return pretty_verdict(out_, v), kExitOk;
      out = to_json(v);
    } else {
      throw UsageError("unknown subcommand '" + sub + "' for " + cmd);
    }
    out["input"] = to_json(c);
    emit(out);
    return kExitOk;
  }

  if (cmd == "norm" || cmd == "extremal-norm") {
    if (!sub.empty()) throw UsageError("unexpected subcommand '" + sub + "' for " + cmd);
    require(!c.function.empty(), "--func", c);
    require(c.space.has_value(), "--space (or --m --a --p)", c);
    const DomainSpec& dom = *c.domain;
    TestFunction u = for_flag("--func", [&] { return parse_function(c.function, &dom); });
    NormResult r = cmd == "norm" ? kondratiev_norm(u, *c.space, dom, *c.quad) : extremal_norm(u, *c.space, dom, *c.quad);
    if (!c.csv.empty()) {
      auto f = open_csv(c.csv);
      write_series_csv(f, r.series);
    }
    if (c.pretty) return pretty_norm(out_, r, cmd), kExitOk;
    json out = to_json(r);
    out["function"] = u.str();
    out["input"] = to_json(c);
    emit(out);
    return kExitOk;
  }

  if (cmd == "verify") {
    VerifyConfig vc;
    vc.quad = *c.quad;
    if (c.seed) vc.seed = *c.seed;
    std::vector<SuiteReport> reps;
    if (sub == "all" || sub.empty()) {
      reps = run_all(vc);
    } else {
      reps.push_back(run_suite(sub, vc));
    }
    bool all = true;
    for (const auto& r : reps) all = all && r.pass;
    if (!c.csv.empty()) {
      auto f = open_csv(c.csv);
      write_cases_csv(f, reps);
    }
    if (c.pretty) {
      pretty_verify(out_, reps, all);
    } else {
      json list = json::array();
      for (const auto& r : reps) list.push_back(to_json(r));
      json out{{"suites", list}, {"pass", all}, {"seed", vc.seed}};
      emit(out);
    }
    return all ? kExitOk : kExitVerifyFailed;
  }
  throw UsageError("unknown command '" + cmd + "'");
}

int Runner::run(const std::vector<std::string>& args) {
  setup();
  std::string command, sub;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app_.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out_ << app_.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app_.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out_ << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  for (auto* s : app_.get_subcommands()) {
    command = s->get_name();
    for (auto* t : s->get_subcommands()) sub = t->get_name();
  }
  try {
    CliConfig c = assemble(command, sub);
    if (f_.emit_config) {
      emit(to_json(c));
      return kExitOk;
    }
    return execute(c);
  } catch (const UsageError& e) {
    err_ << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err_ << "error [" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out, err);
  return r.run(args);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace kondratiev
