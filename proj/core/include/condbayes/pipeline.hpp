#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/candidates.hpp"
#include "condbayes/engine.hpp"
#include "condbayes/prior_store.hpp"
#include "condbayes/ranking.hpp"
#include "condbayes/session.hpp"
#include "condbayes/spec.hpp"
#include "condbayes/trace.hpp"

namespace condbayes {

// Where the initial outcome priors come from:
//   uniform | empirical:<trace dir> | file:<priors file>
struct PriorMode {
  enum class Kind { kUniform, kEmpirical, kFile };
  Kind kind = Kind::kUniform;
  std::filesystem::path path;
};

PriorMode parse_prior_mode(std::string_view text);  // throws InputError

using TraceLoader = std::function<Trace(const std::filesystem::path&)>;

// One prior per outcome atom. Empirical mode reads every *.csv in
// the directory (sorted by name) with `loader`; file mode requires an entry
// for each atom.
PriorStore initial_priors(const Specification& spec, std::span<const Predicate> outcome_atoms,
                          const PriorMode& mode, const TraceLoader& loader = load_trace);

struct RunOptions {
  EngineOptions engine;
  EnumerateOptions enumerate;
  RankKey rank_by = RankKey::kSurprise;
  std::size_t variance_window = kDefaultVarianceWindow;
  bool select = true;  // BIC pruning of nested models
};

struct IterationReport {
  std::size_t iteration = 0;  // 1-based
  std::string trace_name;
  std::vector<Invariant> ranked;
  std::vector<Invariant> dropped;  // by invariant id
};

// Applies traces one at a time to a session: count, infer against the current
// priors, score, select, rank, then fold the trace into the priors.
class Runner {
 public:
  // Throws SessionError when the session was started with another spec, and
  // InputError when it lacks a prior for an outcome atom.
  Runner(Specification spec, Session session, RunOptions options = {});

  IterationReport process(RecordSource& source);

  const Specification& spec() const noexcept { return spec_; }
  const CandidateSet& candidates() const noexcept { return set_; }
  const Session& session() const noexcept { return session_; }
  const RunOptions& options() const noexcept { return options_; }

 private:
  Specification spec_;
  CandidateSet set_;
  Session session_;
  RunOptions options_;
  std::vector<std::vector<std::size_t>> siblings_;  // per outcome atom
};

// A fresh session for `spec` holding `priors`.
Session new_session(const Specification& spec, PriorStore priors);

// End to end over trace files. With a session path the session is resumed
// when the file exists (otherwise started from `prior`), locked for the
// duration, and saved after every trace.
std::vector<IterationReport> run(const Specification& spec,
                                 std::span<const std::filesystem::path> traces,
                                 const PriorMode& prior,
                                 const std::optional<std::filesystem::path>& session_path,
                                 const RunOptions& options = {},
                                 const TraceLoader& loader = load_trace,
                                 Session* final_session = nullptr);

}  // namespace condbayes
