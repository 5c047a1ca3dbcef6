#include <cmath>

#include "condbayes/error.hpp"
#include "condbayes/predicate.hpp"
#include "condbayes/synth.hpp"
#include "doctest.h"

using namespace condbayes;

namespace {

const char* kModel = R"(
# two regimes; the alarm is planted on the "busy" state
states calm busy
initial 0.5 0.5
transition calm 0.9 0.1
transition busy 0.2 0.8
emit calm mode categorical idle:1
emit busy mode categorical run:1
emit * speed normal 10 2
emit busy speed normal 30 3
emit * noise uniform -1 1
plant alarm 1 0 p=0.8 q=0.1 states=busy
plant echo 1 0 p=0.9 q=0.3 if=alarm=1
)";

std::size_t col(const Trace& t, const char* name) { return *t.column_index(name); }

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("same seed, same trace") {
  const auto m = parse_model(kModel);
  CHECK(generate(m, 42, 1000) == generate(m, 42, 1000));
  CHECK_FALSE(generate(m, 42, 1000) == generate(m, 43, 1000));
  CHECK_THROWS_AS(generate(m, 42, 0), EmptyTraceError);
}

TEST_CASE("planted conditionals converge") {
  const auto m = parse_model(kModel);
  const Trace t = generate(m, 7, 100'000);
  const auto mode = col(t, "mode"), alarm = col(t, "alarm"), echo = col(t, "echo");
  std::size_t busy = 0, busy_alarm = 0, calm = 0, calm_alarm = 0, alarm_on = 0, echo_on = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool on = t.at(i, alarm) == Value(1.0);
    if (t.at(i, mode) == Value(std::string("run"))) {
      ++busy;
      busy_alarm += on;
    } else {
      ++calm;
      calm_alarm += on;
    }
    if (on) {
      ++alarm_on;
      echo_on += t.at(i, echo) == Value(1.0);
    }
  }
  CHECK(std::abs(double(busy_alarm) / double(busy) - 0.8) < 0.02);
  CHECK(std::abs(double(calm_alarm) / double(calm) - 0.1) < 0.02);
  CHECK(std::abs(double(echo_on) / double(alarm_on) - 0.9) < 0.02);
}

TEST_CASE("marginals sit within three binomial sigmas") {
  const auto m = parse_model("states s\nemit * c categorical a:1 b:3\nemit * u uniform 0 1\n");
  const std::size_t n = 20'000;
  const Trace t = generate(m, 3, n);
  std::size_t b = 0, below = 0;
  for (std::size_t i = 0; i < n; ++i) {
    b += t.at(i, 0) == Value(std::string("b"));
    below += std::get<double>(t.at(i, 1)) < 0.25;
  }
  const double sd75 = std::sqrt(n * 0.75 * 0.25);
  CHECK(std::abs(double(b) - n * 0.75) < 3 * sd75);
  CHECK(std::abs(double(below) - n * 0.25) < 3 * sd75);
}

TEST_CASE("model errors") {
  CHECK_THROWS_AS(parse_model("emit * x uniform 0 1\n"), FormatError);
  CHECK_THROWS_AS(parse_model("states a b\ntransition a 0.5 0.4\ntransition b 0 1\nemit * x uniform 0 1"),
                  FormatError);
  CHECK_THROWS_AS(parse_model("states a b\ntransition a 1 0\nemit * x uniform 0 1"), FormatError);
  CHECK_THROWS_AS(parse_model("states a\nemit a x normal 0\n"), FormatError);
  CHECK_THROWS_AS(parse_model("states a\nplant x 1 0 p=1.2 q=0\n"), FormatError);
  CHECK_THROWS_AS(parse_model("states a\nplant x 1 0 p=0.5 q=0 if=y=1\nemit * y uniform 0 1\n"), FormatError);
  CHECK_THROWS_AS(parse_model("states a b\ntransition a 1 0\ntransition b 0 1\nemit a x uniform 0 1\n"),
                  FormatError);
}

TEST_CASE("scaling corpus shape") {
  const auto cells = scaling_corpus();
  CHECK(cells.size() == 9);
  CHECK(cells.front().length == 25'000);
  CHECK(cells.front().vars == 5);
  CHECK(cells.back().length == 100'000);
  CHECK(cells.back().vars == 20);
  const auto spec = scaling_spec(20);
  CHECK(expand_predicates(spec).outcomes.size() == 40);
  const Trace t = generate(scaling_model(5), 1, 25'000);
  CHECK(t.size() == 25'000);
  CHECK(t.variables().size() == 5);
}

}  // TEST_SUITE
