#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kondratiev/domain.hpp"
#include "kondratiev/rational.hpp"

namespace kondratiev {

// The triple (m, a, p) naming the space K^m_{a,p}.
struct SpaceParams {
  int m = 0;
  Rational a = 0;
  Exponent p;

  void validate() const;  // invalid-params
  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

// Parses "m=2,a=3/2,p=2" (q accepted as an alias of p).
SpaceParams parse_space(const std::string& text);

enum class Outcome { Holds, Fails, Undetermined };
const char* outcome_name(Outcome o);

// Target space of a product rule; when a_open is set the weight exponent is a
// supremum that is not attained (every a' < a is admissible).
struct Target {
  SpaceParams space;
  bool a_open = false;
};

struct Verdict {
  Outcome outcome = Outcome::Undetermined;
  std::string rule;
  std::string citation;
  std::string reason;
  std::optional<Target> target;
};

enum class Cmp { Lt, Le, Eq, Ge, Gt, IsInteger };

// One exact comparison; re-evaluable.
struct Hypothesis {
  std::string lhs_text;
  Rational lhs;
  Cmp cmp;
  std::string rhs_text;
  Rational rhs;

  bool holds() const;
  std::string str() const;
};

struct ProductEntry {
  std::string rule;
  std::string citation;
  Target target;
  std::vector<Hypothesis> hypotheses;
  std::string side_condition;  // non-empty: the estimate needs extra data on the factors

  bool conditional() const { return !side_condition.empty(); }
  bool reverify() const;
};

struct ProductResult {
  std::vector<ProductEntry> applicable;
  std::optional<size_t> best;
};

Verdict embed_continuous(const SpaceParams& src, const SpaceParams& tgt, const DomainSpec& dom);
Verdict embed_compact(const SpaceParams& src, const SpaceParams& tgt, const DomainSpec& dom);
Verdict is_algebra(const SpaceParams& sp, const DomainSpec& dom);
ProductResult product_target(const SpaceParams& u, const SpaceParams& v, const DomainSpec& dom);
ProductResult power_target(const SpaceParams& sp, int n, const DomainSpec& dom);
Verdict member_constant(const SpaceParams& sp, const DomainSpec& dom);
// sp is the queried space K^m_{a+b,p}; the lemma's exponent is sp.a - b.
Verdict member_rho_power(const Rational& b, const SpaceParams& sp, const DomainSpec& dom);

// Embedding order between two targets (K_s continuously embedded into K_t).
bool target_embeds(const Target& s, const Target& t, int d);

// kappa with 1 in K_{a,p} iff a < kappa/p
int membership_kappa(const DomainSpec& dom);

}  // namespace kondratiev
