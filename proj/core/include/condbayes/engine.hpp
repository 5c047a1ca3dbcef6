#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/candidates.hpp"
#include "condbayes/inference.hpp"
#include "condbayes/trace.hpp"

namespace condbayes {

// Forward-only reader of trace records. The engine pulls every record exactly
// once, in order.
class RecordSource {
 public:
  virtual ~RecordSource() = default;

  virtual std::string_view name() const = 0;
  virtual const std::vector<std::string>& variables() const = 0;
  // Writes the next record (one value per variable) into `out`; false at end.
  virtual bool next(std::span<Value> out) = 0;
};

class TraceSource final : public RecordSource {
 public:
  explicit TraceSource(const Trace& trace, std::string name = "<trace>")
      : trace_(&trace), name_(std::move(name)) {}

  std::string_view name() const override { return name_; }
  const std::vector<std::string>& variables() const override { return trace_->variables(); }
  bool next(std::span<Value> out) override;

 private:
  const Trace* trace_;
  std::string name_;
  std::size_t row_ = 0;
};

struct EngineOptions {
  UndefinedPolicy policy = UndefinedPolicy::kGivenUndefinedIsFalse;
  unsigned threads = 1;      // candidate fan-out; results do not depend on it
  std::size_t block = 4096;  // records evaluated between fan-outs
};

// Evaluable and TRUE timesteps of one atom, for the prior update.
struct AtomTally {
  std::uint64_t evaluable = 0;
  std::uint64_t held = 0;

  bool operator==(const AtomTally&) const = default;
};

struct TraceCounts {
  std::vector<FrequencyCounts> counts;      // per candidate
  std::vector<PartitionCounts> partitions;  // per candidate; no siblings for single-atom outcomes
  std::vector<AtomTally> outcome_tallies;   // per outcome atom
  std::size_t records = 0;

  bool operator==(const TraceCounts&) const = default;
};

// Counts every candidate in one traversal of `source`. Each atom is evaluated
// once per record from a ring buffer holding the last max-window values of its
// variable. Throws TraceMismatchError (naming the source) when a variable is
// missing and TypeMismatchError on kind/value disagreement.
TraceCounts count_all(const CandidateSet& set, RecordSource& source,
                      const EngineOptions& options = {});

// Largest window among the atoms of `set` (1 when there are no Trend atoms).
std::size_t max_window(const CandidateSet& set);

}  // namespace condbayes
