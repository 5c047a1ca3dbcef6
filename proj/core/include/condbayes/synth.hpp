#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "condbayes/spec.hpp"
#include "condbayes/trace.hpp"

namespace condbayes {

struct Distribution {
  enum class Kind { kCategorical, kNormal, kUniform };
  Kind kind = Kind::kUniform;
  std::vector<Value> values;    // categorical outcomes
  std::vector<double> weights;  // categorical weights, normalised
  double a = 0.0;               // normal mean / uniform low
  double b = 1.0;               // normal sd / uniform high
};

// A variable whose value is `on` with probability p in the listed states (and
// when the optional condition on an earlier variable holds), and with
// probability q everywhere else. P(var == on | those givens) is p by
// construction.
struct Plant {
  Value on;
  Value off;
  double p = 0.5;
  double q = 0.5;
  std::vector<std::size_t> states;
  std::optional<std::pair<std::string, Value>> condition;
};

struct VariableRule {
  std::string name;
  std::vector<std::optional<Distribution>> per_state;  // used when not planted
  std::optional<Plant> plant;
};

// Hidden Markov chain over named states. Every variable is drawn once per
// step, in declaration order.
struct GeneratorModel {
  std::vector<std::string> states;
  std::vector<std::vector<double>> transition;  // row = from-state
  std::vector<double> initial;
  double timestep = 1.0;
  std::vector<VariableRule> variables;
};

// Line-oriented text format; '#' starts a comment.
//   states <name>...
//   initial <p>...                      (default: all mass on the first state)
//   transition <from> <p>...            (one row per state; rows sum to 1)
//   timestep <seconds>
//   emit <state|*> <var> categorical <value>:<weight>...
//   emit <state|*> <var> normal <mean> <sd>
//   emit <state|*> <var> uniform <low> <high>
//   plant <var> <on> <off> p=<p> q=<q> [states=<s>,<s>...] [if=<var>=<value>]
// Values that parse as numbers are numeric, anything else is a string.
GeneratorModel parse_model(std::string_view text);
GeneratorModel load_model(const std::filesystem::path& path);

// Pure function of (model, seed, length). Throws EmptyTraceError for length 0.
Trace generate(const GeneratorModel& model, std::uint64_t seed, std::size_t length);

// Shape of the runtime experiment: `vars` DOUBLE-Range variables v0.. with two
// partitions each (v < 0.5, v >= 0.5), declared as outcomes and givens.
struct CorpusCell {
  std::size_t length = 0;
  std::size_t vars = 0;
};

std::vector<CorpusCell> scaling_corpus();  // lengths {25k, 50k, 100k} x vars {5, 10, 20}
Specification scaling_spec(std::size_t vars, int max_givens = 1);
GeneratorModel scaling_model(std::size_t vars);

}  // namespace condbayes
