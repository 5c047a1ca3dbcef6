#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/predicate.hpp"
#include "condbayes/spec.hpp"
#include "condbayes/trace.hpp"

namespace condbayes {

// What to do at a timestep where a predicate of the candidate is UNDEFINED
// (incomplete Trend window, NULL value). An UNDEFINED outcome always removes
// the timestep.
enum class UndefinedPolicy {
  kGivenUndefinedIsFalse,  // the given conjunction simply does not hold
  kExcludeTimestep,        // drop the timestep from n and every count
};

struct FrequencyCounts {
  std::uint64_t n = 0;  // contributing timesteps
  std::uint64_t freq_O = 0;
  std::uint64_t freq_G = 0;
  std::uint64_t freq_OandG = 0;
  std::uint64_t freq_G_and_notO = 0;

  bool consistent() const noexcept {
    return freq_O <= n && freq_G <= n && freq_OandG <= freq_O && freq_OandG <= freq_G &&
           freq_G == freq_OandG + freq_G_and_notO;
  }

  bool operator==(const FrequencyCounts&) const = default;
};

// Counts for one term of the outcome partition used by the total
// probability: timesteps where the term holds, and where the givens also do.
struct TermCounts {
  std::uint64_t freq = 0;
  std::uint64_t freq_and_G = 0;

  bool operator==(const TermCounts&) const = default;
};

// Other atoms defined on the outcome's variable, plus the residual where no
// atom of the variable holds. `overlaps` counts timesteps where two or more
// atoms of the variable held at once.
struct PartitionCounts {
  std::vector<TermCounts> siblings;
  TermCounts residual;
  std::uint64_t overlaps = 0;

  bool operator==(const PartitionCounts&) const = default;
};

struct PriorEntry {
  std::string predicate_id;
  double probability = 0.0;
  std::uint64_t supporting_timesteps = 0;  // 0 only for a fresh uniform prior

  bool operator==(const PriorEntry&) const = default;
};

// Why a candidate has no defined posterior.
enum class ReasonCode {
  kNone,
  kNoOutcomeSupport,  // the outcome never holds in the counted timesteps
  kNoGivenSupport,    // P(G) is zero
  kDegeneratePrior,   // zero prior, or no complement mass to estimate P(G|not O)
  kBicPruned,         // defined, but a simpler nested model scores better
};

std::string_view reason_name(ReasonCode code) noexcept;

struct InferenceResult {
  double likelihood_given_outcome = 0.0;      // P(G|O)
  double likelihood_given_not_outcome = 0.0;  // P(G|not O)
  double total_given = 0.0;                   // P(G)
  double posterior = 0.0;                     // P(O|G)
  FrequencyCounts counts;
  double prior_used = 0.0;
  ReasonCode reason = ReasonCode::kNone;

  bool defined() const noexcept { return reason == ReasonCode::kNone; }
};

// Single traversal of `trace`. `givens` is a conjunction; an empty list is
// vacuously TRUE.
FrequencyCounts count(const Trace& trace, const Predicate& outcome,
                      std::span<const Predicate> givens,
                      UndefinedPolicy policy = UndefinedPolicy::kGivenUndefinedIsFalse);

// Same traversal, additionally tallying the outcome's sibling atoms.
PartitionCounts count_partition(const Trace& trace, const Predicate& outcome,
                                std::span<const Predicate> siblings,
                                std::span<const Predicate> givens,
                                UndefinedPolicy policy = UndefinedPolicy::kGivenUndefinedIsFalse);

// Bayes with the binary complement:
//   P(G|O) = freq_OandG / freq_O,  P(G|not O) = freq_G_and_notO / (n - freq_O)
//   P(G)   = P(G|O) P(O) + P(G|not O) (1 - P(O)),  P(O|G) = P(G|O) P(O) / P(G)
// Undefined cases carry a reason code instead of a silent zero.
// Throws InputError on inconsistent counts or a prior outside [0, 1].
InferenceResult infer(const FrequencyCounts& counts, const PriorEntry& prior);

// Total probability over every atom of the outcome's variable plus the
// residual complement. Siblings without support are folded into the
// residual. Falls back to the binary complement when atoms were seen to
// overlap or the sibling priors leave no residual mass.
InferenceResult infer(const FrequencyCounts& counts, const PriorEntry& prior,
                      const PartitionCounts& partition, std::span<const double> sibling_priors);

// 1 / (atoms + 1 if the partitions leave a residual), one entry per atom.
std::vector<PriorEntry> build_prior_uniform(const PredicateDef& def);

// Observed TRUE frequency of `atom` over its evaluable timesteps in `traces`.
PriorEntry build_prior_empirical(std::span<const Trace> traces, const Predicate& atom);

// (p_old * T_old + observations_new) / (T_old + T_new), support accumulates.
// Throws InputError when timesteps_new == 0 or observations exceed it.
PriorEntry update_prior(const PriorEntry& old, std::uint64_t observations_new,
                        std::uint64_t timesteps_new);

}  // namespace condbayes
