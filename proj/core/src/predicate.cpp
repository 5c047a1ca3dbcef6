#include "condbayes/predicate.hpp"

#include <cmath>
#include <utility>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

Truth from_bool(bool b) noexcept { return b ? Truth::kTrue : Truth::kFalse; }

[[noreturn]] void mismatch(const Predicate& pred, const Value& v) {
  throw TypeMismatchError("predicate '" + pred.id + "' (" + std::string(kind_name(pred.kind)) +
                          ") applied to value '" + to_string(v) + "'");
}

Truth compare_numbers(double v, CompareOp op, double c, double delta) {
  switch (op) {
    case CompareOp::kEq: return from_bool(std::abs(v - c) <= delta);
    case CompareOp::kNe: return from_bool(std::abs(v - c) > delta);
    case CompareOp::kLt: return from_bool(v < c);
    case CompareOp::kGt: return from_bool(v > c);
    case CompareOp::kLe: return from_bool(v <= c);
    case CompareOp::kGe: return from_bool(v >= c);
  }
  return Truth::kUndefined;
}

// Kleene three-valued logic over the expression tree.
Truth eval_expr(const Predicate& pred, const Expr& e, const Value& v, bool string_domain) {
  switch (e.node) {
    case Expr::Node::kCompare: {
      if (is_null(e.literal)) {
        const bool eq = is_null(v);
        return from_bool(e.op == CompareOp::kEq ? eq : !eq);
      }
      if (is_null(v)) return Truth::kUndefined;
      if (string_domain) {
        const std::string* s = std::get_if<std::string>(&v);
        if (s == nullptr) mismatch(pred, v);
        const bool eq = *s == std::get<std::string>(e.literal);
        return from_bool(e.op == CompareOp::kEq ? eq : !eq);
      }
      const double* d = std::get_if<double>(&v);
      if (d == nullptr) mismatch(pred, v);
      return compare_numbers(*d, e.op, std::get<double>(e.literal), pred.delta.value_or(0.0));
    }
    case Expr::Node::kAnd: {
      Truth acc = Truth::kTrue;
      for (const Expr& c : e.children) {
        const Truth t = eval_expr(pred, c, v, string_domain);
        if (t == Truth::kFalse) return Truth::kFalse;
        if (t == Truth::kUndefined) acc = Truth::kUndefined;
      }
      return acc;
    }
    case Expr::Node::kOr: {
      Truth acc = Truth::kFalse;
      for (const Expr& c : e.children) {
        const Truth t = eval_expr(pred, c, v, string_domain);
        if (t == Truth::kTrue) return Truth::kTrue;
        if (t == Truth::kUndefined) acc = Truth::kUndefined;
      }
      return acc;
    }
  }
  return Truth::kUndefined;
}

Truth evaluate_trend(const Predicate& pred, std::span<const Value> recent) {
  const std::size_t w = pred.span();
  if (recent.size() < w) return Truth::kUndefined;
  const std::span<const Value> win = recent.last(w);
  for (const Value& v : win)
    if (is_null(v)) return Truth::kUndefined;

  if (value_type(pred.kind) == ValueType::kString) {
    const std::string* first = std::get_if<std::string>(&win.front());
    const std::string* last = std::get_if<std::string>(&win.back());
    if (first == nullptr) mismatch(pred, win.front());
    if (last == nullptr) mismatch(pred, win.back());
    return eval_expr(pred, pred.expression, Value(*first + "->" + *last), true);
  }

  double d = 0.0;
  if (pred.trend_function == TrendFunction::kEndpointDelta) {
    const double* first = std::get_if<double>(&win.front());
    const double* last = std::get_if<double>(&win.back());
    if (first == nullptr) mismatch(pred, win.front());
    if (last == nullptr) mismatch(pred, win.back());
    d = *last - *first;
  } else {
    // Same arithmetic as trend_derivative, read straight off the window.
    const double mid = static_cast<double>(w - 1) / 2.0;
    double sy = 0.0;
    double ss = 0.0;
    for (std::size_t k = 0; k < w; ++k) {
      const double* y = std::get_if<double>(&win[k]);
      if (y == nullptr) mismatch(pred, win[k]);
      const double s = static_cast<double>(k) - mid;
      sy += s * *y;
      ss += s * s;
    }
    d = sy / ss;
  }
  if (std::abs(d) <= pred.trend_epsilon) d = 0.0;
  return eval_expr(pred, pred.expression, Value(d), false);
}

}  // namespace

std::string predicate_id(const PredicateDef& def, const Expr& partition) {
  std::string id(kind_name(def.kind));
  id += ':';
  id += render(partition);
  if (def.threshold) id += "#d=" + format_number(*def.threshold);
  if (def.window) id += "@w=" + std::to_string(*def.window);
  return id;
}

Predicate make_predicate(std::string var_name, PredicateKind kind, Expr expression,
                         std::optional<double> delta, std::optional<int> window) {
  PredicateDef def;
  def.var_name = var_name;
  def.kind = kind;
  def.threshold = delta;
  def.window = window;
  Predicate p;
  p.id = predicate_id(def, expression);
  p.var_name = std::move(var_name);
  p.kind = kind;
  p.expression = std::move(expression);
  p.delta = delta;
  p.window = window;
  return p;
}

std::vector<Predicate> expand_definition(const PredicateDef& def, const ExpandOptions& options) {
  std::vector<Predicate> out;
  out.reserve(def.partitions.size());
  for (const Expr& partition : def.partitions) {
    Predicate p = make_predicate(def.var_name, def.kind, partition, def.threshold, def.window);
    p.trend_epsilon = options.trend_epsilon;
    p.trend_function = options.trend_function;
    out.push_back(std::move(p));
  }
  return out;
}

PredicateAtoms expand_predicates(const Specification& spec, const ExpandOptions& options) {
  PredicateAtoms atoms;
  for (const PredicateDef& d : spec.outcomes) {
    auto expanded = expand_definition(d, options);
    atoms.outcomes.insert(atoms.outcomes.end(), std::make_move_iterator(expanded.begin()),
                          std::make_move_iterator(expanded.end()));
  }
  for (const PredicateDef& d : spec.givens) {
    auto expanded = expand_definition(d, options);
    atoms.givens.insert(atoms.givens.end(), std::make_move_iterator(expanded.begin()),
                        std::make_move_iterator(expanded.end()));
  }
  return atoms;
}

Truth evaluate(const Predicate& pred, std::span<const Value> recent) {
  if (recent.empty()) return Truth::kUndefined;
  if (pred.pattern() == Pattern::kTrend) return evaluate_trend(pred, recent);
  return eval_expr(pred, pred.expression, recent.back(),
                   value_type(pred.kind) == ValueType::kString);
}

Truth eval(const Predicate& pred, const Trace& trace, std::size_t i) {
  if (i >= trace.size()) throw InputError("trace index out of range");
  const auto col = trace.column_index(pred.var_name);
  if (!col) throw TraceMismatchError("trace has no variable '" + pred.var_name + "'");
  return evaluate(pred, trace.column(*col).first(i + 1));
}

double trend_derivative(std::span<const double> values) {
  const std::size_t w = values.size();
  if (w < 2) return 0.0;
  // With the abscissa centred on the midpoint (s = t - (w-1)/2) the odd
  // moments vanish, so the linear coefficient of the quadratic fit decouples
  // from the curvature: dy/dt at s = 0 is sum(s*y) / sum(s^2). The same
  // expression is the linear least-squares slope, which makes the w == 2
  // fallback coincide with the general case.
  const double mid = static_cast<double>(w - 1) / 2.0;
  double sy = 0.0;
  double ss = 0.0;
  for (std::size_t t = 0; t < w; ++t) {
    const double s = static_cast<double>(t) - mid;
    sy += s * values[t];
    ss += s * s;
  }
  return sy / ss;
}

std::optional<double> velocity_change(const Trace& trace, std::string_view var, std::size_t w,
                                      std::size_t i) {
  if (w < 1 || i >= trace.size() || i + 1 < w) return std::nullopt;
  const auto col = trace.column_index(var);
  if (!col) throw TraceMismatchError("trace has no variable '" + std::string(var) + "'");
  const Value& now = trace.at(i, *col);
  const Value& then = trace.at(i + 1 - w, *col);
  if (is_null(now) || is_null(then)) return std::nullopt;
  const double* a = std::get_if<double>(&now);
  const double* b = std::get_if<double>(&then);
  if (a == nullptr || b == nullptr)
    throw TypeMismatchError("velocity_change needs a numeric variable, '" + std::string(var) +
                            "' is not");
  return *a - *b;
}

}  // namespace condbayes
