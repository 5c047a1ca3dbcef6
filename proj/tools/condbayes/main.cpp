#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "condbayes/candidates.hpp"
#include "condbayes/error.hpp"
#include "condbayes/pipeline.hpp"
#include "condbayes/report.hpp"
#include "condbayes/synth.hpp"

namespace fs = std::filesystem;
using namespace condbayes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct RunArgs {
  fs::path spec;
  std::vector<fs::path> traces;
  bool events = false;
  double timestep = 1.0;
  std::string prior = "uniform";
  std::optional<fs::path> priors_out;
  std::optional<fs::path> report;
  bool report_each = false;
  std::string format = "csv";
  std::string rank_by = "surprise";
  std::optional<std::size_t> top;
  std::optional<fs::path> resume;
  std::optional<int> max_givens;
  unsigned threads = 1;
  std::string policy = "given-false";
  std::string trend = "slope";
  std::size_t variance_window = kDefaultVarianceWindow;
  bool no_select = false;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

Specification load_spec_with(const fs::path& path, std::optional<int> max_givens) {
  Specification spec = load_spec(path);
  if (max_givens) spec.max_givens = *max_givens;
  validate(spec);
  return spec;
}

int do_run(const RunArgs& a) {
  const Specification spec = load_spec_with(a.spec, a.max_givens);
  const ReportFormat format = *parse_report_format(a.format);

  RunOptions options;
  options.rank_by = a.rank_by == "posterior" ? RankKey::kPosterior : RankKey::kSurprise;
  options.engine.threads = a.threads;
  options.engine.policy = a.policy == "exclude" ? UndefinedPolicy::kExcludeTimestep
                                                : UndefinedPolicy::kGivenUndefinedIsFalse;
  options.enumerate.expand.trend_function =
      a.trend == "delta" ? TrendFunction::kEndpointDelta : TrendFunction::kQuadraticSlope;
  options.variance_window = a.variance_window;
  options.select = !a.no_select;

  TraceLoader loader = load_trace;
  if (a.events) {
    const double dt = a.timestep;
    loader = [dt](const fs::path& p) { return wrangle(load_events(p), dt); };
  }

  Session final_session;
  const auto reports =
      run(spec, a.traces, parse_prior_mode(a.prior), a.resume, options, loader, &final_session);

  auto emit = [&](const IterationReport* r, const fs::path& path) {
    const std::vector<Invariant> none;
    auto out = open_out(path);
    write_report(r ? r->ranked : none, out, format, a.top);
    auto side = open_out(dropped_path(path, format));
    write_dropped(r ? r->dropped : none, side, format);
  };

  const IterationReport* last = reports.empty() ? nullptr : &reports.back();
  if (a.report) {
    if (a.report_each)
      for (const IterationReport& r : reports) {
        fs::path p = *a.report;
        p += "." + std::to_string(r.iteration);
        emit(&r, p);
      }
    emit(last, *a.report);
  } else {
    const std::vector<Invariant> none;
    write_report(last ? last->ranked : none, std::cout, format, a.top);
  }
  if (a.priors_out) save_priors(final_session.priors, *a.priors_out);

  if (last != nullptr && last->ranked.empty() && !last->dropped.empty()) {
    std::cerr << "condbayes: every candidate was dropped; see the dropped report\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int do_enumerate(const fs::path& spec_path, std::optional<int> max_givens, bool list) {
  const Specification spec = load_spec_with(spec_path, max_givens);
  const SpaceSummary s = summarize_space(spec);
  std::cout << "outcome atoms: " << s.outcome_atoms << '\n'
            << "given atoms: " << s.given_atoms << '\n'
            << "max givens: " << spec.max_givens << '\n';
  for (std::size_t i = 0; i < s.by_size.size(); ++i)
    std::cout << "candidates with " << i + 1 << " given" << (i == 0 ? "" : "s") << ": " << s.by_size[i]
              << '\n';
  std::cout << "total candidates: " << s.total << '\n';
  if (list) {
    const CandidateSet set = enumerate_candidates(spec);
    for (const Candidate& c : set.candidates) std::cout << set.id(c) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian conditional-invariant miner"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Infer and rank conditional invariants over traces");
  run_cmd->add_option("--spec", ra.spec, "Specification file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--trace", ra.traces, "Trace file, in processing order (repeatable)");
  run_cmd->add_flag("--events", ra.events, "Traces are raw event tables to wrangle first");
  run_cmd->add_option("--timestep", ra.timestep, "Grid step for --events")->check(CLI::PositiveNumber);
  run_cmd->add_option("--prior", ra.prior, "uniform | empirical:<dir> | file:<priors>")
      ->capture_default_str();
  run_cmd->add_option("--priors-out", ra.priors_out, "Write the updated priors here");
  run_cmd->add_option("--report", ra.report, "Report path (stdout when omitted)");
  run_cmd->add_flag("--report-each", ra.report_each, "Also write <report>.<iteration> per trace");
  run_cmd->add_option("--format", ra.format)->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  run_cmd->add_option("--rank-by", ra.rank_by)
      ->check(CLI::IsMember({"surprise", "posterior"}))
      ->capture_default_str();
  run_cmd->add_option("--top", ra.top, "Keep the first N rows");
  run_cmd->add_option("--resume", ra.resume, "Session file; created when missing");
  run_cmd->add_option("--max-givens", ra.max_givens)->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", ra.threads)->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--policy", ra.policy, "Undefined given: given-false | exclude")
      ->check(CLI::IsMember({"given-false", "exclude"}))
      ->capture_default_str();
  run_cmd->add_option("--trend", ra.trend, "Trend reduction: slope | delta")
      ->check(CLI::IsMember({"slope", "delta"}))
      ->capture_default_str();
  run_cmd->add_option("--variance-window", ra.variance_window)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--no-select", ra.no_select, "Keep nested models BIC would prune");

  fs::path enum_spec;
  std::optional<int> enum_max;
  bool enum_list = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "Summarise the candidate space of a specification");
  enum_cmd->add_option("--spec", enum_spec)->required()->check(CLI::ExistingFile);
  enum_cmd->add_option("--max-givens", enum_max)->check(CLI::PositiveNumber);
  enum_cmd->add_flag("--list", enum_list, "Print every candidate id");

  fs::path model_path;
  fs::path synth_out;
  std::uint64_t seed = 1;
  std::size_t length = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace from a model");
  synth_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", seed)->capture_default_str();
  synth_cmd->add_option("--length", length)->required();
  synth_cmd->add_option("--out", synth_out)->required();

  fs::path events_path;
  fs::path wrangle_out;
  double wrangle_dt = 1.0;
  auto* wrangle_cmd = app.add_subcommand("wrangle", "Resample an event table onto a uniform grid");
  wrangle_cmd->add_option("--events", events_path)->required()->check(CLI::ExistingFile);
  wrangle_cmd->add_option("--timestep", wrangle_dt)->required()->check(CLI::PositiveNumber);
  wrangle_cmd->add_option("--out", wrangle_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run_cmd) return do_run(ra);
    if (*enum_cmd) return do_enumerate(enum_spec, enum_max, enum_list);
    if (*synth_cmd) {
      store_trace(generate(load_model(model_path), seed, length), synth_out);
      return kExitOk;
    }
    if (*wrangle_cmd) {
      store_trace(wrangle(load_events(events_path), wrangle_dt), wrangle_out);
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "condbayes: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "condbayes: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
