#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/value.hpp"

namespace condbayes {

enum class ValueType { kInt, kDouble, kString };
enum class Pattern { kEquality, kRange, kTrend };

// The nine grammar types: {INT, DOUBLE, STRING} x {Eq, Range, Trend}.
enum class PredicateKind {
  kIntEq,
  kDoubleEq,
  kStringEq,
  kIntRange,
  kDoubleRange,
  kStringRange,
  kIntTrend,
  kDoubleTrend,
  kStringTrend,
};

ValueType value_type(PredicateKind kind) noexcept;
Pattern pattern(PredicateKind kind) noexcept;
std::string_view kind_name(PredicateKind kind) noexcept;
std::optional<PredicateKind> parse_kind(std::string_view name) noexcept;

enum class CompareOp { kEq, kNe, kLt, kGt, kLe, kGe };

std::string_view op_symbol(CompareOp op) noexcept;

// Boolean expression over a single variable: comparisons joined by && / ||.
struct Expr {
  enum class Node { kCompare, kAnd, kOr };

  Node node = Node::kCompare;
  std::string var;
  CompareOp op = CompareOp::kEq;
  Value literal;
  std::vector<Expr> children;

  static Expr compare(std::string var, CompareOp op, Value literal);
  static Expr all_of(std::vector<Expr> children);
  static Expr any_of(std::vector<Expr> children);

  bool operator==(const Expr&) const = default;
};

std::string render(const Expr& e);

struct PredicateDef {
  std::string var_name;
  PredicateKind kind = PredicateKind::kDoubleRange;
  std::optional<double> threshold;  // fuzzy-equality delta, DOUBLE-Eq only
  std::vector<Expr> partitions;     // one atom per partition
  std::optional<int> window;        // Trend kinds only, >= 2

  bool operator==(const PredicateDef&) const = default;
};

// P(outcome_var | given_vars...): whitelists outcome/given variable pairings.
struct Constraint {
  std::string outcome_var;
  std::vector<std::string> given_vars;

  bool operator==(const Constraint&) const = default;
};

inline constexpr int kDefaultMaxGivens = 5;

struct Specification {
  std::vector<PredicateDef> outcomes;
  std::vector<PredicateDef> givens;
  std::vector<Constraint> constraints;
  int max_givens = kDefaultMaxGivens;

  bool operator==(const Specification&) const = default;
};

// Parses and validates. Throws SyntaxError (with line/column) or
// ValidationError; never returns a partial specification.
Specification parse_spec(std::string_view text);
Specification load_spec(const std::filesystem::path& path);

// Canonical source text; parse_spec(render_spec(s)) == s.
std::string render_spec(const Specification& spec);

// Completeness and consistency checks shared by the parser and by callers
// that build a Specification programmatically. Throws ValidationError.
void validate(const Specification& spec);
void validate(const PredicateDef& def);

// True when the union of the partitions covers every non-NULL value the
// variable can take, i.e. there is no residual complement.
bool partitions_cover_domain(const PredicateDef& def);

// Stable 64-bit FNV-1a digest of the canonical rendering, as hex.
std::string spec_digest(const Specification& spec);

}  // namespace condbayes
