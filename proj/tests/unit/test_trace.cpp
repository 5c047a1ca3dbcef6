#include <random>
#include <sstream>

#include "condbayes/error.hpp"
#include "condbayes/trace.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace condbayes;

namespace {

std::vector<Value> column_of(const Trace& t, const std::string& var) {
  const auto c = t.column_index(var);
  REQUIRE(c);
  const auto col = t.column(*c);
  return {col.begin(), col.end()};
}

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("linear interpolation midpoint") {
  const std::vector<RawEvent> ev{{0.0, "v", 0.0}, {2.0, "v", 1.0}};
  const Trace t = wrangle(ev, 1.0);
  CHECK(column_of(t, "v") == std::vector<Value>{0.0, 0.5, 1.0});
}

TEST_CASE("strings carry the last observation forward") {
  const std::vector<RawEvent> ev{{0.0, "phase", std::string("Sweeping")},
                                 {3.0, "phase", std::string("TargetDet.")}};
  const Trace t = wrangle(ev, 1.0);
  CHECK(column_of(t, "phase") ==
        std::vector<Value>{std::string("Sweeping"), std::string("Sweeping"), std::string("Sweeping"),
                           std::string("TargetDet.")});
}

TEST_CASE("a variable is NULL before its first observation") {
  // Three-event oracle: u starts at t=0, v only at t=2.
  const std::vector<RawEvent> ev{{0.0, "u", 1.0}, {2.0, "v", 5.0}, {2.0, "u", 3.0}};
  const Trace t = wrangle(ev, 1.0);
  CHECK(column_of(t, "u") == std::vector<Value>{1.0, 2.0, 3.0});
  CHECK(column_of(t, "v") == std::vector<Value>{Null{}, Null{}, 5.0});
}

TEST_CASE("wrangling errors") {
  CHECK_THROWS_AS(wrangle(std::vector<RawEvent>{}, 1.0), EmptyTraceError);
  const std::vector<RawEvent> mixed{{0.0, "v", 1.0}, {1.0, "v", std::string("x")}};
  CHECK_THROWS_AS(wrangle(mixed, 1.0), TypeConflictError);
  const std::vector<RawEvent> one{{0.0, "v", 1.0}};
  CHECK_THROWS_AS(wrangle(one, 0.0), InputError);
}

TEST_CASE("interpolated values stay between neighbouring observations") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::vector<RawEvent> ev;
    std::uniform_real_distribution<double> val(-10, 10);
    std::vector<std::pair<double, double>> obs;
    double t = 0.0;
    for (int i = 0; i < 20; ++i) {
      obs.emplace_back(t, val(rng));
      ev.push_back({t, "x", obs.back().second});
      t += std::uniform_int_distribution<int>(1, 4)(rng);
    }
    const Trace tr = wrangle(ev, 1.0);
    const auto col = column_of(tr, "x");
    CHECK(col.size() == static_cast<std::size_t>(obs.back().first) + 1);
    for (std::size_t k = 0; k + 1 < obs.size(); ++k) {
      const auto [t0, y0] = obs[k];
      const auto [t1, y1] = obs[k + 1];
      CHECK(std::get<double>(col[static_cast<std::size_t>(t0)]) == y0);
      for (auto i = static_cast<std::size_t>(t0); i <= static_cast<std::size_t>(t1); ++i) {
        const double y = std::get<double>(col[i]);
        CHECK(y >= std::min(y0, y1) - 1e-12);
        CHECK(y <= std::max(y0, y1) + 1e-12);
      }
    }
  }
}

TEST_CASE("canonical table round trip is bit-exact") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 30; ++round) {
    const std::size_t rows = 1 + rng() % 40;
    std::vector<std::vector<Value>> cols(3, std::vector<Value>(rows));
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    for (std::size_t i = 0; i < rows; ++i) {
      if (rng() % 5) cols[0][i] = val(rng);
      if (rng() % 5) cols[1][i] = std::string(rng() % 2 ? "with, comma" : "plain") + std::to_string(i);
      if (rng() % 5) cols[2][i] = std::string(rng() % 2 ? "4" : " \"quoted\"\nline");
    }
    const Trace t(0.25, {"num", "str", "numeric-looking"}, cols, static_cast<std::int64_t>(rng() % 9));
    std::ostringstream out;
    write_trace(t, out);
    std::istringstream in(out.str());
    const Trace back = read_trace(in);
    CHECK(back == t);
    std::ostringstream again;
    write_trace(back, again);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("table format errors") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_trace(in);
  };
  CHECK_THROWS_AS(parse(""), EmptyTraceError);
  CHECK_THROWS_AS(parse("t,a\n"), EmptyTraceError);
  CHECK_THROWS_AS(parse("x,a\n0,1\n"), FormatError);
  CHECK_THROWS_AS(parse("t,a\n0,1,2\n"), FormatError);
  CHECK_THROWS_AS(parse("t,a\n0,1\n2,1\n"), FormatError);
  CHECK_THROWS_AS(parse("t,a\n1,1\n0,1\n"), FormatError);
  const Trace t = parse("# timestep=0.5\nt,a,b\n0,1,\n1,,\"2\"\n");
  CHECK(t.timestep() == 0.5);
  CHECK(is_null(t.at(0, 1)));
  CHECK(is_null(t.at(1, 0)));
  CHECK(t.column_type(1) == ColumnType::kString);
  CHECK(t.at(1, 1) == Value(std::string("2")));
}

TEST_CASE("event table") {
  std::istringstream in("timestamp,variable,value\n0,phase,Sweeping\n0.5,v,1.5\n1,v,\"2\"\n");
  const auto ev = read_events(in);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].value == Value(std::string("Sweeping")));
  CHECK(ev[1].value == Value(1.5));
  CHECK(ev[2].value == Value(std::string("2")));
}

}  // TEST_SUITE
