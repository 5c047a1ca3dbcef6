#include <fstream>
#include <random>
#include <sstream>

#include "condbayes/error.hpp"
#include "condbayes/pipeline.hpp"
#include "condbayes/report.hpp"
#include "condbayes/session.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace condbayes;
using testsupport::random_int_trace;
using testsupport::TempDir;

namespace {

const char* kSpec = R"(
MAX-GIVENS 2
OUTCOMES
  a, INT-Eq, , a == 1  a == 2,
GIVENS
  b, INT-Eq, , b == 0  b == 1,
  c, INT-Range, , c >= 1,
)";

std::vector<std::filesystem::path> write_traces(const TempDir& dir, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::filesystem::path> out;
  for (int i = 0; i < count; ++i) {
    const auto p = dir / ("trace" + std::to_string(i) + ".csv");
    store_trace(random_int_trace(rng, 100 + rng() % 200, {"a", "b", "c"}, 2), p);
    out.push_back(p);
  }
  return out;
}

std::string report_text(const IterationReport& r) {
  std::ostringstream out;
  write_report(r.ranked, out);
  write_dropped(r.dropped, out);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("prior mode parsing") {
  CHECK(parse_prior_mode("uniform").kind == PriorMode::Kind::kUniform);
  const auto e = parse_prior_mode("empirical:/data/traces");
  CHECK(e.kind == PriorMode::Kind::kEmpirical);
  CHECK(e.path == "/data/traces");
  CHECK(parse_prior_mode("file:p.txt").kind == PriorMode::Kind::kFile);
  CHECK_THROWS_AS(parse_prior_mode("empirical:"), InputError);
  CHECK_THROWS_AS(parse_prior_mode("bayes"), InputError);
}

TEST_CASE("session round trip and lock") {
  TempDir dir;
  Session s;
  s.spec_hash = "abc";
  s.priors.set({"INT-Eq:a == 1", 0.1 + 0.2, 17});
  s.histories["P(x | y)"] = {{1, 1.5}, {2, 1.0 / 3.0}};
  s.iteration = 1;
  s.processed.push_back({"t.csv", 40});
  save_session(s, dir / "s.json");
  CHECK(load_session(dir / "s.json") == s);

  {
    SessionLock lock(dir / "s.json");
    CHECK(std::filesystem::exists(lock.path()));
    CHECK_THROWS_AS(SessionLock(dir / "s.json"), SessionError);
  }
  CHECK_NOTHROW(SessionLock(dir / "s.json"));

  std::istringstream bad(R"({"format":1,"spec_hash":"x","iteration":2,"priors":[],"histories":{},"processed":[]})");
  CHECK_THROWS_AS(read_session(bad), SessionError);
  std::istringstream junk("{not json");
  CHECK_THROWS_AS(read_session(junk), SessionError);
}

TEST_CASE("resume equals an uninterrupted run") {
  TempDir dir;
  const auto spec = parse_spec(kSpec);
  const auto traces = write_traces(dir, 6, 99);

  Session whole;
  const auto all = run(spec, traces, PriorMode{}, dir / "whole.json", {}, load_trace, &whole);
  REQUIRE(all.size() == 6);

  const std::span<const std::filesystem::path> first(traces.data(), 4);
  const std::span<const std::filesystem::path> rest(traces.data() + 4, 2);
  run(spec, first, PriorMode{}, dir / "split.json");
  Session split;
  const auto tail = run(spec, rest, parse_prior_mode("file:/nonexistent"), dir / "split.json", {},
                        load_trace, &split);
  REQUIRE(tail.size() == 2);
  CHECK(split == whole);
  CHECK(report_text(tail.back()) == report_text(all.back()));
  CHECK(slurp(dir / "split.json") == slurp(dir / "whole.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "whole.json.lock"));
}

TEST_CASE("reruns are reproducible and histories grow") {
  TempDir dir;
  const auto spec = parse_spec(kSpec);
  const auto traces = write_traces(dir, 3, 5);
  const auto one = run(spec, traces, PriorMode{}, std::nullopt);
  const auto two = run(spec, traces, PriorMode{}, std::nullopt);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(report_text(one[i]) == report_text(two[i]));
  for (const auto& inv : one.back().ranked) {
    CHECK(inv.surprise_history.size() <= 3);
    CHECK(inv.surprise_history.back().iteration == 3);
  }
}

TEST_CASE("final priors do not depend on trace order") {
  TempDir dir;
  const auto spec = parse_spec(kSpec);
  auto traces = write_traces(dir, 5, 12);
  Session forward;
  run(spec, traces, PriorMode{}, std::nullopt, {}, load_trace, &forward);
  std::reverse(traces.begin(), traces.end());
  Session backward;
  run(spec, traces, PriorMode{}, std::nullopt, {}, load_trace, &backward);
  for (const auto& [id, e] : forward.priors) {
    CHECK(std::abs(backward.priors.at(id).probability - e.probability) < 1e-12);
    CHECK(backward.priors.at(id).supporting_timesteps == e.supporting_timesteps);
  }
}

TEST_CASE("zero traces leave the session alone") {
  TempDir dir;
  const auto spec = parse_spec(kSpec);
  const auto traces = write_traces(dir, 1, 3);
  run(spec, traces, PriorMode{}, dir / "s.json");
  const std::string before = slurp(dir / "s.json");
  const auto reports = run(spec, {}, PriorMode{}, dir / "s.json");
  CHECK(reports.empty());
  CHECK(slurp(dir / "s.json") == before);
}

TEST_CASE("a different specification cannot resume a session") {
  TempDir dir;
  const auto traces = write_traces(dir, 1, 3);
  run(parse_spec(kSpec), traces, PriorMode{}, dir / "s.json");
  auto other = parse_spec(kSpec);
  other.max_givens = 1;
  CHECK_THROWS_AS(run(other, traces, PriorMode{}, dir / "s.json"), SessionError);
}

TEST_CASE("empirical and file priors") {
  TempDir dir;
  std::filesystem::create_directories(dir / "prior");
  std::mt19937_64 rng(1);
  const Trace base = random_int_trace(rng, 500, {"a", "b", "c"}, 2);
  store_trace(base, dir / "prior" / "base.csv");
  const auto spec = parse_spec(kSpec);
  const auto atoms = expand_predicates(spec).outcomes;
  const PriorStore emp = initial_priors(spec, atoms, parse_prior_mode("empirical:" + (dir / "prior").string()));
  for (const auto& atom : atoms)
    CHECK(emp.at(atom.id) == build_prior_empirical(std::span<const Trace>(&base, 1), atom));

  save_priors(emp, dir / "p.txt");
  CHECK(initial_priors(spec, atoms, parse_prior_mode("file:" + (dir / "p.txt").string())) == emp);
  PriorStore partial;
  partial.set(emp.at(atoms[0].id));
  save_priors(partial, dir / "partial.txt");
  CHECK_THROWS_AS(initial_priors(spec, atoms, parse_prior_mode("file:" + (dir / "partial.txt").string())),
                  InputError);
}

TEST_CASE("report rows") {
  TempDir dir;
  const auto spec = parse_spec(kSpec);
  const auto traces = write_traces(dir, 2, 77);
  const auto reports = run(spec, traces, PriorMode{}, std::nullopt);
  const auto& ranked = reports.back().ranked;
  REQUIRE(ranked.size() >= 2);

  std::ostringstream none;
  write_report(ranked, none, ReportFormat::kCsv, 0);
  const std::string none_text = none.str();
  CHECK(std::count(none_text.begin(), none_text.end(), '\n') == 1);

  std::ostringstream top;
  write_report(ranked, top, ReportFormat::kCsv, 2);
  const std::string top_text = top.str();
  CHECK(std::count(top_text.begin(), top_text.end(), '\n') == 3);
  for (std::size_t i = 1; i < ranked.size(); ++i) CHECK(ranked[i - 1].surprise >= ranked[i].surprise);

  std::ostringstream text;
  write_report(ranked, text, ReportFormat::kText);
  CHECK(text.str().rfind("rank  invariant_id", 0) == 0);
}

}  // TEST_SUITE
