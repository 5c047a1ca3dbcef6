#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/spec.hpp"
#include "condbayes/trace.hpp"
#include "condbayes/value.hpp"

namespace condbayes {

// Three-valued result of evaluating a predicate at one trace index.
enum class Truth : std::uint8_t { kFalse = 0, kTrue = 1, kUndefined = 2 };

// How a Trend predicate reduces its window to one number.
enum class TrendFunction {
  kQuadraticSlope,  // derivative of the least-squares quadratic at the window midpoint
  kEndpointDelta,   // current value minus the value w-1 steps back
};

inline constexpr double kDefaultTrendEpsilon = 1e-6;

// One evaluable atom: a single partition of a PredicateDef.
struct Predicate {
  std::string id;  // stable key, used by the prior store
  std::string var_name;
  PredicateKind kind = PredicateKind::kDoubleRange;
  Expr expression;
  std::optional<double> delta;
  std::optional<int> window;
  double trend_epsilon = kDefaultTrendEpsilon;
  TrendFunction trend_function = TrendFunction::kQuadraticSlope;

  Pattern pattern() const noexcept { return condbayes::pattern(kind); }
  // Number of consecutive records the predicate reads; 1 unless Trend.
  std::size_t span() const noexcept {
    return window ? static_cast<std::size_t>(*window) : std::size_t{1};
  }

  bool operator==(const Predicate&) const = default;
};

// "<KIND>:<expression>" plus "#d=<delta>" and "@w=<window>" when present.
std::string predicate_id(const PredicateDef& def, const Expr& partition);

// A single atom built directly from its parts; the id is derived.
Predicate make_predicate(std::string var_name, PredicateKind kind, Expr expression,
                         std::optional<double> delta = std::nullopt,
                         std::optional<int> window = std::nullopt);

struct PredicateAtoms {
  std::vector<Predicate> outcomes;
  std::vector<Predicate> givens;
};

struct ExpandOptions {
  double trend_epsilon = kDefaultTrendEpsilon;
  TrendFunction trend_function = TrendFunction::kQuadraticSlope;
};

// One atom per partition expression per definition, in declaration order.
PredicateAtoms expand_predicates(const Specification& spec, const ExpandOptions& options = {});
std::vector<Predicate> expand_definition(const PredicateDef& def, const ExpandOptions& options = {});

// Evaluates `pred` on the values of its variable ending at the index of
// interest: `recent.back()` is the current value. A Trend predicate whose
// window does not fit in `recent` is UNDEFINED; so is any comparison against
// a NULL value other than an explicit NULL test.
// Throws TypeMismatchError when the value type does not fit the kind.
Truth evaluate(const Predicate& pred, std::span<const Value> recent);

// The eval of a single inference step, at trace index i.
Truth eval(const Predicate& pred, const Trace& trace, std::size_t i);

// Least-squares fit y = a t^2 + b t + c over t = 0..w-1, differentiated at the
// window midpoint. Rank-deficient fits (w == 2) fall back to the linear slope.
double trend_derivative(std::span<const double> values);

// value(i) - value(i - w + 1); nullopt when the window leaves the trace or
// touches a NULL.
std::optional<double> velocity_change(const Trace& trace, std::string_view var, std::size_t w,
                                      std::size_t i);

}  // namespace condbayes
