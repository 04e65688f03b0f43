#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "kondratiev/errors.hpp"
#include "kondratiev/io.hpp"
#include "kondratiev/verify.hpp"

using namespace kondratiev;

namespace {

struct Out {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Out run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

std::string tmp_path(const std::string& name) { return "/tmp/kondratiev_test_" + name; }

}  // namespace

TEST_CASE("decide embed example gives Holds under the continuous embedding rule") {
  auto r = run({"decide", "embed", "--domain", "model", "--d", "3", "--l", "0", "--src", "m=2,a=1,p=2", "--tgt",
                "m=1,a=0,q=4"});
  REQUIRE(r.code == 0);
  auto j = r.j();
  CHECK(j["outcome"] == "Holds");
  CHECK(j["rule"] == "Thm-3.3");
  // outcome comes first in the document
  CHECK(r.out.find("\"outcome\"") < r.out.find("\"rule\""));
}

TEST_CASE("identity embedding holds") {
  auto r = run({"decide", "embed", "--src", "m=2,a=1,p=2", "--tgt", "m=2,a=1,q=2", "--domain", "model", "--d", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.j()["outcome"] == "Holds");
}

TEST_CASE("a Fails verdict still exits 0") {
  // equality line a' = a - d/p + d/q: continuous but not compact
  auto c = run({"decide", "compact", "--src", "m=2,a=1,p=2", "--tgt", "m=1,a=1/4,p=4"});
  REQUIRE(c.code == 0);
  CHECK(c.j()["outcome"] == "Fails");
  auto e = run({"decide", "embed", "--src", "m=2,a=1,p=2", "--tgt", "m=1,a=1/4,p=4"});
  CHECK(e.j()["outcome"] == "Holds");
}

TEST_CASE("product, power, algebra and member subcommands emit one JSON document") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"decide", "product", "--u", "m=2,a=2,p=2", "--v", "m=2,a=2,p=2"},
           {"decide", "power", "--space", "m=2,a=2,p=2", "--n", "3"},
           {"decide", "algebra", "--space", "m=2,a=2,p=2"},
           {"member", "const", "--space", "m=1,a=1/2,p=2", "--domain", "smooth-cone", "--gamma", "0.8"},
           {"member", "rho", "--b", "-0.4", "--m", "1", "--a", "1", "--p", "2"}}) {
    auto r = run(args);
    CAPTURE(args[1]);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).is_object());
  }
  auto p = run({"decide", "product", "--u", "m=2,a=2,p=2", "--v", "m=2,a=2,p=2"}).j();
  CHECK(p["applicable"].size() >= 1);
  CHECK(p["best"] == "Thm-5.1");
}

TEST_CASE("norm example: divergent with the closed-form tail slope, CSV written") {
  const std::string csv = tmp_path("series.csv");
  std::remove(csv.c_str());
  auto r = run({"norm", "--func", "rho_pow(b=-0.4)*psi()", "--m", "1", "--a", "1.4", "--p", "2", "--domain", "model",
                "--d", "3", "--l", "0", "--jmax", "40", "--csv", csv});
  REQUIRE(r.code == 0);
  auto j = r.j();
  // (b - a) p + d - l = -0.6: the radial integral diverges, shells grow like 2^{0.6 j}
  CHECK(j["converged"] == false);
  CHECK(j["series"]["tailSlope"].get<double>() == doctest::Approx(0.6).epsilon(1e-6));
  std::ifstream f(csv);
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(line == "j,s_j");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == static_cast<int>(j["series"]["s"].size()));
}

TEST_CASE("norm converges below the threshold with slope -((b - a) p + d - l)") {
  auto j = run({"norm", "--func", "rho_pow(b=-0.4)*psi()", "--m", "1", "--a", "1", "--p", "2", "--d", "3"}).j();
  CHECK(j["converged"] == true);
  CHECK(std::isfinite(j["value"].get<double>()));
  CHECK(j["series"]["tailSlope"].get<double>() == doctest::Approx(-0.2).epsilon(1e-6));
  auto e = run({"extremal-norm", "--func", "rho_pow(b=-0.4)*psi()", "--m", "1", "--a", "1", "--p", "2", "--d", "3"}).j();
  CHECK(e["value"].get<double>() <= j["value"].get<double>());
}

TEST_CASE("usage errors exit 2 and name the flag") {
  auto missing = run({"decide", "embed", "--src", "m=2,a=1,p=2"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--tgt") != std::string::npos);

  auto bad = run({"decide", "embed", "--src", "m=2,a=x,p=2", "--tgt", "m=1,a=0,p=2"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--src") != std::string::npos);

  auto unknown = run({"decide", "embed", "--bogus", "1"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);

  auto gamma = run({"member", "const", "--space", "m=0,a=0,p=2", "--domain", "smooth-cone", "--gamma", "4"});
  CHECK(gamma.code == 2);
  CHECK(gamma.err.find("--domain") != std::string::npos);

  auto nocmd = run({});
  CHECK(nocmd.code == 2);

  auto suite = run({"verify", "no-such-suite"});
  CHECK(suite.code == 2);
  CHECK(suite.err.find("suite-unknown") != std::string::npos);

  auto csv = run({"decide", "algebra", "--space", "m=2,a=2,p=2", "--csv", "x.csv"});
  CHECK(csv.code == 2);
  CHECK(csv.err.find("--csv") != std::string::npos);
}

TEST_CASE("numerical failure exits 3") {
  auto r = run({"norm", "--func", "bump(r=0.3)", "--m", "2", "--a", "0", "--p", "2", "--domain", "model", "--d", "2",
                "--target", "1e-15", "--refine", "0"});
  CHECK(r.code == 3);
  CHECK(r.err.find("quadrature-failure") != std::string::npos);
}

TEST_CASE("config round trip reproduces output bit for bit") {
  const std::vector<std::vector<std::string>> cases = {
      {"decide", "embed", "--domain", "model", "--d", "3", "--l", "0", "--src", "m=2,a=1,p=2", "--tgt", "m=1,a=0,q=4"},
      {"decide", "power", "--space", "m=2,a=0.6,p=inf", "--n", "2", "--domain", "polyhedral", "--ngon", "5"},
      {"member", "rho", "--b", "-3/25", "--space", "m=2,a=7/5,p=2", "--domain", "dihedral", "--d", "3"},
      {"norm", "--func", "rho_pow(b=-0.4)*psi()", "--m", "1", "--a", "1", "--p", "2", "--d", "3", "--profile", "fast"},
      {"extremal-norm", "--func", "dilate(2, bump(r=0.2))", "--m", "2", "--a", "1/2", "--p", "3/2", "--domain",
       "smooth-cone", "--gamma", "0.7", "--jmax", "30", "--order", "21"},
  };
  int k = 0;
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    auto direct = run(args);
    REQUIRE(direct.code == 0);
    auto emitted = run([&] {
      auto a = args;
      a.push_back("--emit-config");
      return a;
    }());
    REQUIRE(emitted.code == 0);
    const std::string path = tmp_path("cfg" + std::to_string(k++) + ".json");
    std::ofstream(path) << emitted.out;
    auto again = run({"--config", path});
    REQUIRE(again.code == 0);
    CHECK(again.out == direct.out);

    CliConfig c = config_from_json(json::parse(emitted.out));
    CHECK(config_from_json(to_json(c)) == c);
  }
}

TEST_CASE("config files reject unknown keys at every level") {
  for (const char* text : {R"({"command":"decide","subcommand":"embed","bogus":1})",
                           R"({"command":"decide","subcommand":"algebra","space":{"m":1,"a":"1","p":"2","x":0}})",
                           R"({"command":"norm","domain":{"kind":"ModelCase","d":3,"l":0,"radius":1}})",
                           R"({"command":"norm","quad":{"jMax":20,"panelz":2}})"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(config_from_json(json::parse(text)), Error);
    const std::string path = tmp_path("bad.json");
    std::ofstream(path) << text;
    auto r = run({"--config", path});
    CHECK(r.code == 2);
  }
}

TEST_CASE("flags override a config file") {
  const std::string path = tmp_path("over.json");
  std::ofstream(path) << R"({"command":"decide","subcommand":"embed","src":"m=2,a=1,p=2","tgt":"m=1,a=0,p=4"})";
  CHECK(run({"--config", path}).j()["outcome"] == "Holds");
  CHECK(run({"--config", path, "--tgt", "m=3,a=0,p=2"}).j()["outcome"] == "Fails");
}

TEST_CASE("verify registry is complete and a single suite runs through the CLI") {
  const std::vector<std::string> expected = {"homogeneity",         "oracle",          "closed-form",
                                             "equivalent-norm",     "isomorphism",     "partition",
                                             "algebra-sharpness",   "decision-consistency", "noncompact-witness",
                                             "product-uniformity",  "moser",           "multiplier",
                                             "decomposition",       "sobolev-threshold"};
  CHECK(suite_ids() == expected);

  const std::string csv = tmp_path("cases.csv");
  auto r = run({"verify", "closed-form", "--csv", csv});
  CHECK(r.code == 0);
  auto j = r.j();
  REQUIRE(j["suites"].size() == 1);
  CHECK(j["suites"][0]["suite"] == "closed-form");
  CHECK(j["pass"] == true);
  std::ifstream f(csv);
  std::string head;
  std::getline(f, head);
  CHECK(head == "suite,input,expected,observed,pass");
}

TEST_CASE("pretty output is not JSON") {
  auto r = run({"decide", "algebra", "--space", "m=2,a=2,p=2", "--pretty"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("outcome", 0) == 0);
}
