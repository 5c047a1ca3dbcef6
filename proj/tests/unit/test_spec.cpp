#include <random>

#include "condbayes/error.hpp"
#include "condbayes/predicate.hpp"
#include "condbayes/spec.hpp"
#include "doctest.h"

using namespace condbayes;

TEST_SUITE("spec") {

TEST_CASE("one outcome, one given, one constraint") {
  const auto spec = parse_spec(
      "OUTCOMES sensor.status, INT-Eq, , sensor.status==4, GIVENS y-velocity, DOUBLE-Range, , "
      "y-velocity>=0.01 ∧ y-velocity<0.25, CONSTRAINTS P(sensor.status | y-velocity)");
  REQUIRE(spec.outcomes.size() == 1);
  REQUIRE(spec.givens.size() == 1);
  REQUIRE(spec.constraints.size() == 1);
  CHECK(spec.outcomes[0].kind == PredicateKind::kIntEq);
  CHECK(spec.givens[0].partitions[0].node == Expr::Node::kAnd);
  CHECK(spec.constraints[0].outcome_var == "sensor.status");
  CHECK(spec.constraints[0].given_vars == std::vector<std::string>{"y-velocity"});
  CHECK(spec.max_givens == kDefaultMaxGivens);
}

TEST_CASE("empty constraints section means no pruning") {
  const auto spec = parse_spec("OUTCOMES a, INT-Eq, , a == 1, GIVENS b, INT-Eq, , b == 2, CONSTRAINTS");
  CHECK(spec.constraints.empty());
}

TEST_CASE("fuzzy equality threshold") {
  const auto spec = parse_spec(
      "OUTCOMES m, STRING-Eq, , m == \"x\", GIVENS Acceleration, DOUBLE-Eq, 0.01, Acceleration==9.8,");
  REQUIRE(spec.givens[0].threshold);
  CHECK(*spec.givens[0].threshold == doctest::Approx(0.01));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_spec("OUTCOMES\n  a, INT-Eq, , a = 1,\nGIVENS b, INT-Eq, , b == 1,");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 18);
  }
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, INT-Eq, , b == 1, GIVENS b, INT-Eq, , b == 1,"), ValidationError);
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, INT-Eq, , a == 1, GIVENS b, DOUBLE-Trend, , b > 0,"),
                  ValidationError);
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, INT-Eq, , a == 1, GIVENS b, INT-Eq, , b == 1, "
                             "CONSTRAINTS P(a | c)"),
                  ValidationError);
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, INT-Eq, , a == 1, GIVENS b, DOUBLE-Trend, , b > 0, 1"),
                  ValidationError);
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, STRING-Eq, , a == 1, GIVENS b, INT-Eq, , b == 1,"),
                  ValidationError);
  CHECK_THROWS_AS(parse_spec("OUTCOMES a, INT-Eq, , a == 1 a == 1, GIVENS b, INT-Eq, , b == 1,"),
                  ValidationError);
}

TEST_CASE("a variable may appear on both sides") {
  const auto spec = parse_spec("OUTCOMES s, INT-Eq, , s == 1, GIVENS s, INT-Eq, , s == 1,");
  CHECK(spec.outcomes[0] == spec.givens[0]);
}

TEST_CASE("expansion yields one atom per partition") {
  const auto spec = parse_spec(
      "OUTCOMES x, DOUBLE-Range, , x < 0.01  x >= 0.01 && x < 0.25  x >= 0.25, "
      "GIVENS d, DOUBLE-Trend, , d < 0  d == 0  d > 0, 3");
  const auto atoms = expand_predicates(spec);
  REQUIRE(atoms.outcomes.size() == 3);
  REQUIRE(atoms.givens.size() == 3);
  for (const Predicate& p : atoms.givens) CHECK(p.window == 3);
  CHECK(atoms.outcomes[1].id == "DOUBLE-Range:x >= 0.01 && x < 0.25");
  CHECK(atoms.givens[0].id == "DOUBLE-Trend:d < 0@w=3");
}

TEST_CASE("domain coverage") {
  auto def = [](const char* text) { return parse_spec(text).outcomes[0]; };
  const char* tail = " GIVENS g, INT-Eq, , g == 1,";
  CHECK(partitions_cover_domain(def((std::string("OUTCOMES v, DOUBLE-Range, , v < 1  v >= 1,") + tail).c_str())));
  CHECK_FALSE(partitions_cover_domain(def((std::string("OUTCOMES v, DOUBLE-Range, , v < 1  v > 1,") + tail).c_str())));
  // Integers: nothing lies strictly between 1 and 2.
  CHECK(partitions_cover_domain(def((std::string("OUTCOMES v, INT-Range, , v <= 1  v >= 2,") + tail).c_str())));
  CHECK(partitions_cover_domain(def((std::string("OUTCOMES s, STRING-Eq, , s == \"a\"  s != \"a\",") + tail).c_str())));
  CHECK_FALSE(partitions_cover_domain(def((std::string("OUTCOMES s, STRING-Eq, , s == \"a\"  s == \"b\",") + tail).c_str())));
  CHECK(partitions_cover_domain(def((std::string("OUTCOMES s, STRING-Eq, , s == \"a\" || s != \"a\",") + tail).c_str())));
}

namespace {

// Random valid specifications for the round-trip property.
class SpecGen {
 public:
  explicit SpecGen(std::uint64_t seed) : rng_(seed) {}

  Specification spec() {
    Specification s;
    s.max_givens = pick(1, 6);
    const int no = pick(1, 3);
    const int ng = pick(1, 4);
    for (int i = 0; i < no; ++i) s.outcomes.push_back(def("o" + std::to_string(i)));
    for (int i = 0; i < ng; ++i) s.givens.push_back(def("g" + std::to_string(i) + ".x-y"));
    if (pick(0, 1) == 1) {
      for (const auto& o : s.outcomes) {
        Constraint c{o.var_name, {}};
        for (const auto& g : s.givens)
          if (pick(0, 1) == 1) c.given_vars.push_back(g.var_name);
        if (c.given_vars.empty()) c.given_vars.push_back(s.givens[0].var_name);
        s.constraints.push_back(c);
      }
    }
    return s;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  PredicateDef def(const std::string& var) {
    PredicateDef d;
    d.var_name = var;
    d.kind = static_cast<PredicateKind>(pick(0, 8));
    if (d.kind == PredicateKind::kDoubleEq && pick(0, 1) == 1) d.threshold = pick(0, 100) / 64.0;
    if (pattern(d.kind) == Pattern::kTrend) d.window = pick(2, 9);
    const int parts = pick(1, 3);
    for (int i = 0; i < parts; ++i) d.partitions.push_back(expr(d, 2, i));
    return d;
  }

  Expr expr(const PredicateDef& d, int depth, int salt) {
    if (depth > 0 && pick(0, 2) == 0) {
      std::vector<Expr> kids;
      const int n = pick(2, 3);
      for (int i = 0; i < n; ++i) kids.push_back(expr(d, depth - 1, salt * 7 + i));
      return pick(0, 1) ? Expr::all_of(std::move(kids)) : Expr::any_of(std::move(kids));
    }
    const bool str = value_type(d.kind) == ValueType::kString;
    const bool trend = pattern(d.kind) == Pattern::kTrend;
    if (!trend && pick(0, 5) == 0)
      return Expr::compare(d.var_name, pick(0, 1) ? CompareOp::kEq : CompareOp::kNe, Null{});
    if (str) {
      static const char* words[] = {"a", "Sweeping", "Target Det.", "q\"uote", "back\\slash", "x->y"};
      return Expr::compare(d.var_name, pick(0, 1) ? CompareOp::kEq : CompareOp::kNe,
                           std::string(words[pick(0, 5)]) + std::to_string(salt));
    }
    const auto op = static_cast<CompareOp>(pick(0, 5));
    const double lit = value_type(d.kind) == ValueType::kInt ? pick(-50, 50) + salt * 100.0
                                                              : (pick(-5000, 5000) + salt) / 37.0;
    return Expr::compare(d.var_name, op, lit);
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("render then parse is the identity") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SpecGen gen(seed);
    Specification s;
    // Duplicate partitions can be drawn; those specs are not valid inputs.
    for (;;) {
      s = gen.spec();
      try {
        validate(s);
        break;
      } catch (const ValidationError&) {
      }
    }
    const std::string text = render_spec(s);
    CAPTURE(text);
    const Specification back = parse_spec(text);
    CHECK(back == s);
    CHECK(render_spec(back) == text);
    CHECK(spec_digest(back) == spec_digest(s));
  }
}

TEST_CASE("invalid inputs never produce a specification") {
  const std::string good = "OUTCOMES a, INT-Eq, , a == 1, GIVENS b, INT-Range, , b < 3 || b > 7, CONSTRAINTS P(a | b)";
  // Every proper prefix that stops inside a definition is rejected.
  for (std::size_t n = 0; n < good.size(); ++n) {
    const std::string prefix = good.substr(0, n);
    bool ok = true;
    try {
      parse_spec(prefix);
    } catch (const InputError&) {
      ok = false;
    }
    if (ok) {
      // The only acceptable prefixes are complete specifications.
      CHECK(prefix.find("GIVENS b, INT-Range, , b < 3 || b > 7,") != std::string::npos);
    }
  }
}

}  // TEST_SUITE
