#include <random>

#include "condbayes/candidates.hpp"
#include "condbayes/engine.hpp"
#include "condbayes/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace condbayes;
using testsupport::random_int_trace;

namespace {

class CountingSource final : public RecordSource {
 public:
  explicit CountingSource(const Trace& t) : inner_(t, "counted") {}
  std::string_view name() const override { return inner_.name(); }
  const std::vector<std::string>& variables() const override { return inner_.variables(); }
  bool next(std::span<Value> out) override {
    const bool more = inner_.next(out);
    calls += more;
    return more;
  }
  std::size_t calls = 0;

 private:
  TraceSource inner_;
};

const char* kSpec = R"(
MAX-GIVENS 3
OUTCOMES
  a, INT-Range, , a == 0  a == 1  a >= 1,
  d, INT-Trend, , d > 0, 3
GIVENS
  b, INT-Range, , b < 2  b == NULL,
  c, INT-Eq, , c == 1  c == 2,
  d, INT-Trend, , d < 0  d == 0, 4
  a, INT-Eq, , a == 2,
)";

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("one pass reproduces per-candidate reference counts") {
  const Specification spec = parse_spec(kSpec);
  const CandidateSet set = enumerate_candidates(spec);
  std::mt19937_64 rng(21);
  for (int round = 0; round < 25; ++round) {
    const Trace t = random_int_trace(rng, 10 + rng() % 300, {"a", "b", "c", "d"}, 3, 0.05);
    for (auto policy : {UndefinedPolicy::kGivenUndefinedIsFalse, UndefinedPolicy::kExcludeTimestep}) {
      TraceSource src(t);
      EngineOptions opt;
      opt.policy = policy;
      opt.block = 1 + rng() % 64;
      const TraceCounts tc = count_all(set, src, opt);
      REQUIRE(tc.counts.size() == set.candidates.size());
      CHECK(tc.records == t.size());
      for (std::size_t c = 0; c < set.candidates.size(); ++c) {
        const Candidate& cand = set.candidates[c];
        const auto givens = set.givens_of(cand);
        const Predicate& o = set.outcome_atoms[cand.outcome];
        CHECK(tc.counts[c] == count(t, o, givens, policy));
        std::vector<Predicate> sibs;
        for (std::size_t s : set.siblings(cand.outcome)) sibs.push_back(set.outcome_atoms[s]);
        if (!sibs.empty()) CHECK(tc.partitions[c] == count_partition(t, o, sibs, givens, policy));
      }
      for (std::size_t o = 0; o < set.outcome_atoms.size(); ++o) {
        const auto e = build_prior_empirical(std::span<const Trace>(&t, 1), set.outcome_atoms[o]);
        CHECK(tc.outcome_tallies[o].evaluable == e.supporting_timesteps);
      }
    }
  }
}

TEST_CASE("thread count does not change results") {
  const Specification spec = parse_spec(kSpec);
  const CandidateSet set = enumerate_candidates(spec);
  std::mt19937_64 rng(4);
  const Trace t = random_int_trace(rng, 5000, {"a", "b", "c", "d"}, 3, 0.02);
  TraceSource s1(t);
  const TraceCounts one = count_all(set, s1);
  for (unsigned threads : {2u, 3u, 8u}) {
    TraceSource sn(t);
    EngineOptions opt;
    opt.threads = threads;
    opt.block = 777;
    CHECK(count_all(set, sn, opt) == one);
  }
}

TEST_CASE("each record is read exactly once") {
  const Specification spec = parse_spec(kSpec);
  const CandidateSet set = enumerate_candidates(spec);
  std::mt19937_64 rng(8);
  const Trace t = random_int_trace(rng, 1234, {"a", "b", "c", "d"}, 3);
  CountingSource src(t);
  count_all(set, src);
  CHECK(src.calls == t.size());
  CHECK(max_window(set) == 4);
}

TEST_CASE("missing variable names the trace") {
  const Specification spec = parse_spec(kSpec);
  const CandidateSet set = enumerate_candidates(spec);
  std::mt19937_64 rng(1);
  const Trace t = random_int_trace(rng, 10, {"a", "b", "c"}, 3);
  TraceSource src(t, "flight-07.csv");
  try {
    count_all(set, src);
    FAIL("expected a mismatch");
  } catch (const TraceMismatchError& e) {
    CHECK(std::string(e.what()).find("flight-07.csv") != std::string::npos);
    CHECK(std::string(e.what()).find("'d'") != std::string::npos);
  }
}

}  // TEST_SUITE
