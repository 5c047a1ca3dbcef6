#include <algorithm>
#include <cmath>
#include <random>

#include "condbayes/error.hpp"
#include "condbayes/ranking.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace condbayes;
using testsupport::int_eq;

namespace {

// Log-likelihood as a running sum of per-observation log probabilities.
double oracle_log_likelihood(int n, int successes, double rate) {
  double ll = 0.0;
  for (int i = 0; i < n; ++i) ll += std::log(i < successes ? rate : 1.0 - rate);
  return ll;
}

Invariant make(const std::string& outcome, std::vector<std::string> givens, double posterior,
               std::uint64_t n, std::uint64_t successes) {
  Invariant inv;
  inv.outcome = int_eq(outcome, 1);
  for (const auto& g : givens) inv.givens.push_back(int_eq(g, 1));
  inv.id = invariant_id(inv.outcome, inv.givens);
  inv.result.posterior = posterior;
  inv.result.counts.freq_G = n;
  inv.result.counts.freq_OandG = successes;
  inv.k = static_cast<int>(givens.size()) + 1;
  inv.bic = bic(n, inv.k, posterior, successes);
  return inv;
}

}  // namespace

TEST_SUITE("ranking") {

TEST_CASE("surprise ratio") {
  CHECK(surprise(0.3, 0.3) == 1.0);
  CHECK(surprise(0.6, 0.3) == doctest::Approx(2.0));
  CHECK(surprise(0.39, 0.3) == doctest::Approx(1.3));
  CHECK_THROWS_AS(surprise(0.5, 0.0), InputError);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double post = u(rng);
    const double prior = u(rng);
    const double c = u(rng) * 10;
    CHECK(surprise(c * post, c * prior) == doctest::Approx(surprise(post, prior)));
  }
}

TEST_CASE("surprise variance") {
  CHECK(surprise_variance(std::vector<double>{2, 2, 2, 2}) == 0.0);
  CHECK(surprise_variance(std::vector<double>{1, 3}) == doctest::Approx(2.0));
  CHECK_FALSE(surprise_variance(std::vector<double>{1}));
  CHECK_FALSE(surprise_variance(std::vector<double>{}));
  // Only the trailing window counts.
  CHECK(surprise_variance(std::vector<double>{100, -50, 1, 1, 1, 1, 1}) == 0.0);
  CHECK(surprise_variance(std::vector<double>{100, 1, 3}, 2) == doctest::Approx(2.0));
}

TEST_CASE("BIC against an independent likelihood") {
  const double b = bic(100, 2, 0.9, 90);
  CHECK(oracle_log_likelihood(100, 90, 0.9) == doctest::Approx(-32.508).epsilon(1e-4));
  CHECK(b == doctest::Approx(std::log(100.0) * 2 - 2 * oracle_log_likelihood(100, 90, 0.9)));
  CHECK(b == doctest::Approx(74.23).epsilon(1e-3));
  for (int n : {1, 7, 50, 333}) {
    for (int s = 0; s <= n; s += std::max(1, n / 5)) {
      const double rate = (s + 0.5) / (n + 1.0);
      CHECK(bic(n, 3, rate, s) == doctest::Approx(std::log(n) * 3 - 2 * oracle_log_likelihood(n, s, rate)));
    }
  }
  // A perfect fit leaves only the complexity penalty.
  CHECK(bic(40, 2, 1.0, 40) == doctest::Approx(std::log(40.0) * 2).epsilon(1e-6));
  // One more parameter at the same fit costs ln(n).
  CHECK(bic(80, 3, 0.7, 56) - bic(80, 2, 0.7, 56) == doctest::Approx(std::log(80.0)));
  CHECK_THROWS_AS(bic(0, 2, 0.5, 0), InputError);
  CHECK_THROWS_AS(bic(5, 2, 0.5, 6), InputError);
}

TEST_CASE("nested model selection") {
  SUBCASE("unchanged fit prunes the superset") {
    std::vector<Invariant> pruned;
    const auto kept = select_models({make("o", {"a"}, 0.5, 100, 50), make("o", {"a", "b"}, 0.5, 100, 50)}, &pruned);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].givens.size() == 1);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned[0].givens.size() == 2);
  }
  SUBCASE("a real improvement is retained") {
    const auto kept = select_models({make("o", {"a"}, 0.5, 100, 50), make("o", {"a", "b"}, 0.9, 100, 90)});
    CHECK(kept.size() == 2);
  }
  SUBCASE("singletons and other outcomes are untouched") {
    const auto kept = select_models({make("o", {"a"}, 0.5, 100, 50), make("p", {"a", "b"}, 0.5, 100, 50)});
    CHECK(kept.size() == 2);
  }
  SUBCASE("every present subset must be beaten") {
    // {a,b} beats {a} but not {b}.
    const auto kept = select_models({make("o", {"a"}, 0.5, 100, 50), make("o", {"b"}, 0.95, 100, 95),
                                     make("o", {"a", "b"}, 0.9, 100, 90)});
    CHECK(kept.size() == 2);
    for (const auto& k : kept) CHECK(k.givens.size() == 1);
  }
}

TEST_CASE("ranking order") {
  auto inv = [](const std::string& id, double s, double post) {
    Invariant i;
    i.id = id;
    i.surprise = s;
    i.result.posterior = post;
    return i;
  };
  std::vector<Invariant> v{inv("b", 57.54, 0.5), inv("a", 159.85, 0.3), inv("d", 2.0, 0.3),
                           inv("c", 2.0, 0.8), inv("e", 2.0, 0.3)};
  rank(v);
  std::vector<std::string> ids;
  for (const auto& i : v) ids.push_back(i.id);
  CHECK(ids == std::vector<std::string>{"a", "b", "c", "d", "e"});
  rank(v, RankKey::kPosterior);
  CHECK(v.front().id == "c");
  std::vector<Invariant> empty;
  rank(empty);
  CHECK(empty.empty());

  // Any input order gives the same ranking.
  std::mt19937_64 rng(3);
  std::vector<Invariant> base = v;
  rank(base);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(v.begin(), v.end(), rng);
    rank(v);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k].id == base[k].id);
  }
}

}  // TEST_SUITE
