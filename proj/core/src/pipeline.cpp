#include "condbayes/pipeline.hpp"

#include <algorithm>

#include "condbayes/error.hpp"

namespace condbayes {

PriorMode parse_prior_mode(std::string_view text) {
  PriorMode m;
  if (text == "uniform") return m;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (head == "empirical" && !rest.empty()) {
    m.kind = PriorMode::Kind::kEmpirical;
  } else if (head == "file" && !rest.empty()) {
    m.kind = PriorMode::Kind::kFile;
  } else {
    throw InputError("prior mode must be uniform, empirical:<dir> or file:<path>, got '" +
                     std::string(text) + "'");
  }
  m.path = std::string(rest);
  return m;
}

PriorStore initial_priors(const Specification& spec, std::span<const Predicate> outcome_atoms,
                          const PriorMode& mode, const TraceLoader& loader) {
  PriorStore store;
  switch (mode.kind) {
    case PriorMode::Kind::kUniform:
      for (const PredicateDef& d : spec.outcomes)
        for (PriorEntry& e : build_prior_uniform(d)) store.set(std::move(e));
      break;
    case PriorMode::Kind::kEmpirical: {
      std::vector<std::filesystem::path> files;
      if (!std::filesystem::is_directory(mode.path))
        throw InputError("empirical prior directory '" + mode.path.string() + "' not found");
      for (const auto& entry : std::filesystem::directory_iterator(mode.path))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      if (files.empty())
        throw InputError("no .csv traces in empirical prior directory '" + mode.path.string() + "'");
      std::vector<Trace> traces;
      traces.reserve(files.size());
      for (const auto& f : files) traces.push_back(loader(f));
      for (const Predicate& atom : outcome_atoms) store.set(build_prior_empirical(traces, atom));
      break;
    }
    case PriorMode::Kind::kFile: {
      const PriorStore loaded = load_priors(mode.path);
      for (const Predicate& atom : outcome_atoms) store.set(loaded.at(atom.id));
      break;
    }
  }
  return store;
}

Session new_session(const Specification& spec, PriorStore priors) {
  Session s;
  s.spec_hash = spec_digest(spec);
  s.priors = std::move(priors);
  return s;
}

Runner::Runner(Specification spec, Session session, RunOptions options)
    : spec_(std::move(spec)), session_(std::move(session)), options_(std::move(options)) {
  validate(spec_);
  if (session_.spec_hash != spec_digest(spec_))
    throw SessionError("session was started with a different specification");
  set_ = enumerate_candidates(spec_, options_.enumerate);
  for (const Predicate& atom : set_.outcome_atoms) (void)session_.priors.at(atom.id);
  siblings_.reserve(set_.outcome_atoms.size());
  for (std::size_t o = 0; o < set_.outcome_atoms.size(); ++o) siblings_.push_back(set_.siblings(o));
}

IterationReport Runner::process(RecordSource& source) {
  const TraceCounts counts = count_all(set_, source, options_.engine);
  const std::size_t iteration = session_.iteration + 1;

  std::vector<Invariant> defined;
  std::vector<Invariant> dropped;
  std::vector<double> sibling_priors;
  for (std::size_t c = 0; c < set_.candidates.size(); ++c) {
    const Candidate& cand = set_.candidates[c];
    Invariant inv;
    inv.outcome = set_.outcome_atoms[cand.outcome];
    inv.givens = set_.givens_of(cand);
    inv.id = invariant_id(inv.outcome, inv.givens);
    inv.k = static_cast<int>(inv.givens.size()) + 1;

    const PriorEntry& prior = session_.priors.at(inv.outcome.id);
    const auto& sibs = siblings_[cand.outcome];
    if (sibs.empty()) {
      inv.result = infer(counts.counts[c], prior);
    } else {
      sibling_priors.clear();
      for (std::size_t s : sibs)
        sibling_priors.push_back(session_.priors.at(set_.outcome_atoms[s].id).probability);
      inv.result = infer(counts.counts[c], prior, counts.partitions[c], sibling_priors);
    }
    if (!inv.result.defined() || inv.result.counts.freq_G == 0) {
      if (inv.result.defined()) inv.result.reason = ReasonCode::kNoGivenSupport;
      dropped.push_back(std::move(inv));
      continue;
    }
    inv.surprise = surprise(inv.result.posterior, inv.result.prior_used);
    inv.bic = bic(inv.result.counts.freq_G, inv.k, inv.result.posterior, inv.result.counts.freq_OandG);
    auto& history = session_.histories[inv.id];
    history.push_back({iteration, inv.surprise});
    inv.surprise_history = history;
    inv.surprise_variance = surprise_variance(std::span<const SurpriseSample>(history),
                                              options_.variance_window);
    defined.push_back(std::move(inv));
  }

  IterationReport report;
  report.iteration = iteration;
  report.trace_name = std::string(source.name());
  if (options_.select) {
    std::vector<Invariant> pruned;
    report.ranked = select_models(std::move(defined), &pruned);
    for (Invariant& p : pruned) {
      p.result.reason = ReasonCode::kBicPruned;
      dropped.push_back(std::move(p));
    }
  } else {
    report.ranked = std::move(defined);
  }
  rank(report.ranked, options_.rank_by);
  std::sort(dropped.begin(), dropped.end(),
            [](const Invariant& a, const Invariant& b) { return a.id < b.id; });
  report.dropped = std::move(dropped);

  // This trace becomes evidence for the next iteration's priors.
  for (std::size_t o = 0; o < set_.outcome_atoms.size(); ++o) {
    const AtomTally& t = counts.outcome_tallies[o];
    if (t.evaluable == 0) continue;
    session_.priors.set(update_prior(session_.priors.at(set_.outcome_atoms[o].id), t.held, t.evaluable));
  }
  session_.iteration = iteration;
  session_.processed.push_back({report.trace_name, counts.records});
  return report;
}

std::vector<IterationReport> run(const Specification& spec,
                                 std::span<const std::filesystem::path> traces,
                                 const PriorMode& prior,
                                 const std::optional<std::filesystem::path>& session_path,
                                 const RunOptions& options, const TraceLoader& loader,
                                 Session* final_session) {
  std::optional<SessionLock> lock;
  Session session;
  const bool resume = session_path && std::filesystem::exists(*session_path);
  if (session_path) lock.emplace(*session_path);
  if (resume) {
    session = load_session(*session_path);
  } else {
    const auto atoms = expand_predicates(spec, options.enumerate.expand).outcomes;
    session = new_session(spec, initial_priors(spec, atoms, prior, loader));
  }

  Runner runner(spec, std::move(session), options);
  std::vector<IterationReport> reports;
  reports.reserve(traces.size());
  for (const auto& path : traces) {
    const Trace trace = loader(path);
    TraceSource source(trace, path.string());
    reports.push_back(runner.process(source));
    if (session_path) save_session(runner.session(), *session_path);
  }
  if (session_path && traces.empty() && !resume) save_session(runner.session(), *session_path);
  if (final_session != nullptr) *final_session = runner.session();
  return reports;
}

}  // namespace condbayes
