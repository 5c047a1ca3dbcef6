#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condbayes/inference.hpp"
#include "condbayes/predicate.hpp"

namespace condbayes {

struct SurpriseSample {
  std::size_t iteration = 0;
  double surprise = 0.0;

  bool operator==(const SurpriseSample&) const = default;
};

// One candidate P(outcome | givens...) with its inference and scores.
struct Invariant {
  std::string id;
  Predicate outcome;
  std::vector<Predicate> givens;
  InferenceResult result;
  double surprise = 0.0;
  std::vector<SurpriseSample> surprise_history;  // append-only, iteration-ordered
  std::optional<double> surprise_variance;
  double bic = 0.0;
  int k = 0;  // model parameters: givens + 1
};

// "P(<outcome id> | <given id>, <given id>...)"
std::string invariant_id(const Predicate& outcome, std::span<const Predicate> givens);

// posterior / prior; 1 means conditioning changed nothing. Requires prior > 0.
double surprise(double posterior, double prior);

inline constexpr std::size_t kDefaultVarianceWindow = 5;

// Sample variance (n - 1 denominator) of the last `window` values; nullopt
// when fewer than two values are available.
std::optional<double> surprise_variance(std::span<const double> history,
                                        std::size_t window = kDefaultVarianceWindow);
std::optional<double> surprise_variance(std::span<const SurpriseSample> history,
                                        std::size_t window = kDefaultVarianceWindow);

// Bernoulli log-likelihood of `successes` out of `n` at `rate`, with the rate
// clamped to [1e-12, 1 - 1e-12].
double bernoulli_log_likelihood(std::uint64_t n, std::uint64_t successes, double rate);

// ln(n) k - 2 ln(L), L the Bernoulli likelihood of the conditioned outcomes at
// the posterior rate. Lower is better. Requires n >= 1 and successes <= n.
double bic(std::uint64_t n, int k, double posterior, std::uint64_t successes);

// Within each outcome, a model with more givens survives only if its BIC is
// strictly lower than the BIC of every subset model present. Returns the
// retained models in input order; pruned ones go to `pruned` when given.
std::vector<Invariant> select_models(std::vector<Invariant> candidates,
                                     std::vector<Invariant>* pruned = nullptr);

enum class RankKey { kSurprise, kPosterior };

// Descending by the key, then by posterior, then ascending by id.
void rank(std::vector<Invariant>& invariants, RankKey key = RankKey::kSurprise);

}  // namespace condbayes
