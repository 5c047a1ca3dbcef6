#include "condbayes/inference.hpp"

#include <algorithm>
#include <cmath>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

struct Columns {
  std::size_t outcome;
  std::vector<std::size_t> siblings;
  std::vector<std::size_t> givens;
};

std::size_t column_of(const Trace& trace, const Predicate& p) {
  const auto c = trace.column_index(p.var_name);
  if (!c) throw TraceMismatchError("trace has no variable '" + p.var_name + "'");
  return *c;
}

Truth at(const Trace& trace, std::size_t col, const Predicate& p, std::size_t i) {
  return evaluate(p, trace.column(col).first(i + 1));
}

// One pass over the trace; `on_step` sees each contributing timestep.
template <typename OnStep>
void traverse(const Trace& trace, const Predicate& outcome, std::span<const Predicate> givens,
              UndefinedPolicy policy, OnStep&& on_step) {
  const std::size_t oc = column_of(trace, outcome);
  std::vector<std::size_t> gc;
  gc.reserve(givens.size());
  for (const Predicate& g : givens) gc.push_back(column_of(trace, g));

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Truth o = at(trace, oc, outcome, i);
    if (o == Truth::kUndefined) continue;
    bool g_all = true;
    bool skip = false;
    for (std::size_t k = 0; k < givens.size(); ++k) {
      const Truth g = at(trace, gc[k], givens[k], i);
      if (g == Truth::kUndefined && policy == UndefinedPolicy::kExcludeTimestep) {
        skip = true;
        break;
      }
      g_all = g_all && g == Truth::kTrue;
    }
    if (skip) continue;
    on_step(i, o == Truth::kTrue, g_all);
  }
}

void check_prior(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("prior probability outside [0, 1]");
}

}  // namespace

std::string_view reason_name(ReasonCode code) noexcept {
  switch (code) {
    case ReasonCode::kNone: return "";
    case ReasonCode::kNoOutcomeSupport: return "NO_OUTCOME_SUPPORT";
    case ReasonCode::kNoGivenSupport: return "NO_GIVEN_SUPPORT";
    case ReasonCode::kDegeneratePrior: return "DEGENERATE_PRIOR";
    case ReasonCode::kBicPruned: return "BIC_PRUNED";
  }
  return "";
}

FrequencyCounts count(const Trace& trace, const Predicate& outcome,
                      std::span<const Predicate> givens, UndefinedPolicy policy) {
  FrequencyCounts c;
  traverse(trace, outcome, givens, policy, [&](std::size_t, bool o, bool g) {
    ++c.n;
    c.freq_O += o;
    c.freq_G += g;
    c.freq_OandG += o && g;
    c.freq_G_and_notO += !o && g;
  });
  return c;
}

PartitionCounts count_partition(const Trace& trace, const Predicate& outcome,
                                std::span<const Predicate> siblings,
                                std::span<const Predicate> givens, UndefinedPolicy policy) {
  std::vector<std::size_t> sc;
  for (const Predicate& s : siblings) sc.push_back(column_of(trace, s));
  PartitionCounts pc;
  pc.siblings.resize(siblings.size());
  traverse(trace, outcome, givens, policy, [&](std::size_t i, bool o, bool g) {
    int held = o ? 1 : 0;
    for (std::size_t j = 0; j < siblings.size(); ++j) {
      if (at(trace, sc[j], siblings[j], i) != Truth::kTrue) continue;
      ++held;
      ++pc.siblings[j].freq;
      pc.siblings[j].freq_and_G += g;
    }
    if (held == 0) {
      ++pc.residual.freq;
      pc.residual.freq_and_G += g;
    }
    pc.overlaps += held > 1;
  });
  return pc;
}

InferenceResult infer(const FrequencyCounts& counts, const PriorEntry& prior) {
  if (!counts.consistent()) throw InputError("inconsistent frequency counts");
  const double p = prior.probability;
  check_prior(p);

  InferenceResult r;
  r.counts = counts;
  r.prior_used = p;
  if (counts.freq_O == 0) {
    r.reason = ReasonCode::kNoOutcomeSupport;
    return r;
  }
  if (p <= 0.0) {
    r.reason = ReasonCode::kDegeneratePrior;
    return r;
  }
  r.likelihood_given_outcome =
      static_cast<double>(counts.freq_OandG) / static_cast<double>(counts.freq_O);
  if (p < 1.0) {
    const std::uint64_t not_o = counts.n - counts.freq_O;
    if (not_o == 0) {
      r.reason = ReasonCode::kDegeneratePrior;
      return r;
    }
    r.likelihood_given_not_outcome =
        static_cast<double>(counts.freq_G_and_notO) / static_cast<double>(not_o);
  }
  r.total_given = r.likelihood_given_outcome * p + r.likelihood_given_not_outcome * (1.0 - p);
  if (r.total_given <= 0.0) {
    r.reason = ReasonCode::kNoGivenSupport;
    return r;
  }
  r.posterior = r.likelihood_given_outcome * p / r.total_given;
  return r;
}

InferenceResult infer(const FrequencyCounts& counts, const PriorEntry& prior,
                      const PartitionCounts& partition, std::span<const double> sibling_priors) {
  if (partition.siblings.empty()) return infer(counts, prior);
  if (sibling_priors.size() != partition.siblings.size())
    throw InputError("one prior per sibling atom is required");
  const double p = prior.probability;
  check_prior(p);
  double residual_prior = 1.0 - p;
  for (double q : sibling_priors) {
    check_prior(q);
    residual_prior -= q;
  }
  if (partition.overlaps > 0 || residual_prior < -1e-9) return infer(counts, prior);
  residual_prior = std::max(residual_prior, 0.0);

  InferenceResult r = infer(counts, prior);
  if (r.reason == ReasonCode::kNoOutcomeSupport || p <= 0.0) return r;
  r.reason = ReasonCode::kNone;

  // Terms with no support merge into the residual; fixed summation order.
  TermCounts residual = partition.residual;
  double total = r.likelihood_given_outcome * p;
  for (std::size_t j = 0; j < partition.siblings.size(); ++j) {
    const TermCounts& t = partition.siblings[j];
    if (t.freq == 0) {
      residual_prior += sibling_priors[j];
      continue;
    }
    total += static_cast<double>(t.freq_and_G) / static_cast<double>(t.freq) * sibling_priors[j];
  }
  if (residual_prior > 0.0) {
    if (residual.freq == 0) {
      r.reason = ReasonCode::kDegeneratePrior;
      return r;
    }
    total += static_cast<double>(residual.freq_and_G) / static_cast<double>(residual.freq) *
             residual_prior;
  }
  r.total_given = total;
  r.likelihood_given_not_outcome = p < 1.0 ? (total - r.likelihood_given_outcome * p) / (1.0 - p) : 0.0;
  if (total <= 0.0) {
    r.reason = ReasonCode::kNoGivenSupport;
    r.posterior = 0.0;
    return r;
  }
  r.posterior = std::min(1.0, r.likelihood_given_outcome * p / total);
  return r;
}

std::vector<PriorEntry> build_prior_uniform(const PredicateDef& def) {
  const auto atoms = expand_definition(def);
  const std::size_t terms = atoms.size() + (partitions_cover_domain(def) ? 0 : 1);
  std::vector<PriorEntry> out;
  out.reserve(atoms.size());
  for (const Predicate& a : atoms) out.push_back({a.id, 1.0 / static_cast<double>(terms), 0});
  return out;
}

PriorEntry build_prior_empirical(std::span<const Trace> traces, const Predicate& atom) {
  std::uint64_t held = 0;
  std::uint64_t evaluable = 0;
  for (const Trace& trace : traces) {
    const std::size_t col = column_of(trace, atom);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const Truth t = at(trace, col, atom, i);
      if (t == Truth::kUndefined) continue;
      ++evaluable;
      held += t == Truth::kTrue;
    }
  }
  PriorEntry e;
  e.predicate_id = atom.id;
  e.supporting_timesteps = evaluable;
  e.probability = evaluable == 0 ? 0.0 : static_cast<double>(held) / static_cast<double>(evaluable);
  return e;
}

PriorEntry update_prior(const PriorEntry& old, std::uint64_t observations_new,
                        std::uint64_t timesteps_new) {
  if (timesteps_new == 0) throw InputError("prior update needs at least one new timestep");
  if (observations_new > timesteps_new)
    throw InputError("prior update observations exceed timesteps");
  check_prior(old.probability);
  PriorEntry e = old;
  const double t_old = static_cast<double>(old.supporting_timesteps);
  const double t_new = static_cast<double>(timesteps_new);
  e.probability = (old.probability * t_old + static_cast<double>(observations_new)) / (t_old + t_new);
  e.supporting_timesteps = old.supporting_timesteps + timesteps_new;
  return e;
}

}  // namespace condbayes
