#include "condbayes/spec.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

struct KindInfo {
  PredicateKind kind;
  std::string_view name;
  ValueType type;
  Pattern pattern;
};

constexpr std::array<KindInfo, 9> kKinds{{
    {PredicateKind::kIntEq, "INT-Eq", ValueType::kInt, Pattern::kEquality},
    {PredicateKind::kDoubleEq, "DOUBLE-Eq", ValueType::kDouble, Pattern::kEquality},
    {PredicateKind::kStringEq, "STRING-Eq", ValueType::kString, Pattern::kEquality},
    {PredicateKind::kIntRange, "INT-Range", ValueType::kInt, Pattern::kRange},
    {PredicateKind::kDoubleRange, "DOUBLE-Range", ValueType::kDouble, Pattern::kRange},
    {PredicateKind::kStringRange, "STRING-Range", ValueType::kString, Pattern::kRange},
    {PredicateKind::kIntTrend, "INT-Trend", ValueType::kInt, Pattern::kTrend},
    {PredicateKind::kDoubleTrend, "DOUBLE-Trend", ValueType::kDouble, Pattern::kTrend},
    {PredicateKind::kStringTrend, "STRING-Trend", ValueType::kString, Pattern::kTrend},
}};

const KindInfo& info(PredicateKind kind) noexcept {
  return kKinds[static_cast<std::size_t>(kind)];
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string render_literal(const Value& v) {
  if (is_null(v)) return "NULL";
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  return quote(std::get<std::string>(v));
}

void render_into(const Expr& e, std::string& out) {
  if (e.node == Expr::Node::kCompare) {
    out += e.var;
    out += ' ';
    out += op_symbol(e.op);
    out += ' ';
    out += render_literal(e.literal);
    return;
  }
  const std::string_view joiner = e.node == Expr::Node::kAnd ? " && " : " || ";
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    if (i > 0) out += joiner;
    const Expr& child = e.children[i];
    if (child.node == Expr::Node::kCompare) {
      render_into(child, out);
    } else {
      out += '(';
      render_into(child, out);
      out += ')';
    }
  }
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  kIdent,
  kNumber,
  kString,
  kNull,
  kComma,
  kLParen,
  kRParen,
  kBar,
  kAnd,
  kOr,
  kOp,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  CompareOp op = CompareOp::kEq;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      lex_one(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_, col_); }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_one(Token& t) {
    const char c = peek();
    // UTF-8 spellings of the connectives and of <= / >=.
    if (starts_with("∧")) return simple(t, Tok::kAnd, 3);
    if (starts_with("∨")) return simple(t, Tok::kOr, 3);
    if (starts_with("≤")) return op(t, CompareOp::kLe, 3);
    if (starts_with("≥")) return op(t, CompareOp::kGe, 3);
    if (starts_with("&&")) return simple(t, Tok::kAnd, 2);
    if (starts_with("||")) return simple(t, Tok::kOr, 2);
    if (starts_with("==")) return op(t, CompareOp::kEq, 2);
    if (starts_with("!=")) return op(t, CompareOp::kNe, 2);
    if (starts_with("<=")) return op(t, CompareOp::kLe, 2);
    if (starts_with(">=")) return op(t, CompareOp::kGe, 2);
    if (c == '<') return op(t, CompareOp::kLt, 1);
    if (c == '>') return op(t, CompareOp::kGt, 1);
    if (c == ',') return simple(t, Tok::kComma, 1);
    if (c == '(') return simple(t, Tok::kLParen, 1);
    if (c == ')') return simple(t, Tok::kRParen, 1);
    if (c == '|') return simple(t, Tok::kBar, 1);
    if (c == '"') return string(t);
    if (digit(c) || c == '.' || ((c == '-' || c == '+') && (digit(peek(1)) || peek(1) == '.')))
      return number(t);
    if (ident_start(c)) return ident(t);
    fail(std::string("unexpected character '") + c + "'");
  }

  void simple(Token& t, Tok kind, std::size_t n) {
    t.kind = kind;
    t.text = std::string(src_.substr(pos_, n));
    advance(n);
  }

  void op(Token& t, CompareOp o, std::size_t n) {
    simple(t, Tok::kOp, n);
    t.op = o;
  }

  void string(Token& t) {
    t.kind = Tok::kString;
    advance();
    for (;;) {
      if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal");
      const char c = peek();
      if (c == '"') {
        advance();
        return;
      }
      if (c == '\\') {
        const char e = peek(1);
        switch (e) {
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case 'r': t.text += '\r'; break;
          default: fail("unknown escape in string literal");
        }
        advance(2);
        continue;
      }
      t.text += c;
      advance();
    }
  }

  void number(Token& t) {
    const std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') advance();
    while (digit(peek())) advance();
    if (peek() == '.') {
      advance();
      while (digit(peek())) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t n = 1;
      if (peek(1) == '-' || peek(1) == '+') ++n;
      if (digit(peek(n))) {
        advance(n);
        while (digit(peek())) advance();
      }
    }
    t.kind = Tok::kNumber;
    t.text = std::string(src_.substr(start, pos_ - start));
    const auto parsed = parse_number(t.text);
    if (!parsed) throw SyntaxError("malformed number '" + t.text + "'", t.line, t.column);
    t.number = *parsed;
    if (ident_start(peek())) fail("identifier may not start with a digit");
  }

  void ident(Token& t) {
    const std::size_t start = pos_;
    while (ident_char(peek())) advance();
    t.kind = Tok::kIdent;
    t.text = std::string(src_.substr(start, pos_ - start));
    if (t.text == "NULL" || t.text == "null") t.kind = Tok::kNull;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser: recursive descent over the token stream.

constexpr std::string_view kOutcomes = "OUTCOMES";
constexpr std::string_view kGivens = "GIVENS";
constexpr std::string_view kConstraints = "CONSTRAINTS";
constexpr std::string_view kMaxGivens = "MAX-GIVENS";

bool is_keyword(const Token& t) {
  return t.kind == Tok::kIdent &&
         (t.text == kOutcomes || t.text == kGivens || t.text == kConstraints ||
          t.text == kMaxGivens);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Specification run() {
    Specification spec;
    if (at_keyword(kMaxGivens)) {
      next();
      const Token& n = expect(Tok::kNumber, "a number after MAX-GIVENS");
      if (n.number != std::floor(n.number) || n.number < 1 || n.number > 64)
        fail(n, "MAX-GIVENS must be an integer in [1, 64]");
      spec.max_givens = static_cast<int>(n.number);
    }
    expect_keyword(kOutcomes);
    while (at_def_start()) spec.outcomes.push_back(pred_def());
    expect_keyword(kGivens);
    while (at_def_start()) spec.givens.push_back(pred_def());
    if (at_keyword(kConstraints)) {
      next();
      while (peek().kind == Tok::kIdent && !is_keyword(peek())) spec.constraints.push_back(constraint());
    }
    if (peek().kind != Tok::kEnd) fail(peek(), "unexpected '" + peek().text + "'");
    return spec;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& what) {
    throw SyntaxError(what, t.line, t.column);
  }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      const std::string got = peek().kind == Tok::kEnd ? "end of input" : "'" + peek().text + "'";
      fail(peek(), "expected " + std::string(what) + ", got " + got);
    }
    return next();
  }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::kIdent && peek().text == kw;
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      const std::string got = peek().kind == Tok::kEnd ? "end of input" : "'" + peek().text + "'";
      fail(peek(), "expected " + std::string(kw) + ", got " + got);
    }
    next();
  }

  bool at_def_start() const { return peek().kind == Tok::kIdent && !is_keyword(peek()); }

  PredicateDef pred_def() {
    PredicateDef def;
    def.var_name = next().text;
    expect(Tok::kComma, "',' after variable name");
    const Token& type = expect(Tok::kIdent, "a predicate type");
    const auto kind = parse_kind(type.text);
    if (!kind) fail(type, "unknown predicate type '" + type.text + "'");
    def.kind = *kind;
    expect(Tok::kComma, "',' after predicate type");
    if (peek().kind == Tok::kNumber) def.threshold = next().number;
    expect(Tok::kComma, "',' after threshold");
    while (peek().kind == Tok::kIdent || peek().kind == Tok::kLParen) {
      if (is_keyword(peek())) fail(peek(), "unexpected keyword in partitions");
      def.partitions.push_back(disjunction());
    }
    expect(Tok::kComma, "',' after partitions");
    if (peek().kind == Tok::kNumber) {
      const Token& w = next();
      if (w.number != std::floor(w.number) || w.number < 1 || w.number > 1e6)
        fail(w, "window must be a positive integer");
      def.window = static_cast<int>(w.number);
    }
    return def;
  }

  Expr disjunction() {
    std::vector<Expr> items;
    items.push_back(conjunction());
    while (peek().kind == Tok::kOr) {
      next();
      items.push_back(conjunction());
    }
    return items.size() == 1 ? std::move(items.front()) : Expr::any_of(std::move(items));
  }

  Expr conjunction() {
    std::vector<Expr> items;
    items.push_back(primary());
    while (peek().kind == Tok::kAnd) {
      next();
      items.push_back(primary());
    }
    return items.size() == 1 ? std::move(items.front()) : Expr::all_of(std::move(items));
  }

  Expr primary() {
    if (peek().kind == Tok::kLParen) {
      next();
      Expr inner = disjunction();
      expect(Tok::kRParen, "')'");
      return inner;
    }
    const Token& var = expect(Tok::kIdent, "a variable name");
    if (is_keyword(var)) fail(var, "unexpected keyword in expression");
    const Token& o = expect(Tok::kOp, "a comparison operator");
    const Token& lit = peek();
    Value literal;
    switch (lit.kind) {
      case Tok::kNumber: literal = lit.number; break;
      case Tok::kString: literal = lit.text; break;
      case Tok::kNull: literal = Null{}; break;
      default: fail(lit, "expected a number, string or NULL literal");
    }
    next();
    return Expr::compare(var.text, o.op, std::move(literal));
  }

  Constraint constraint() {
    const Token& p = next();
    if (p.text != "P") fail(p, "expected 'P(' to start a constraint");
    expect(Tok::kLParen, "'(' after P");
    Constraint c;
    const Token& outcome = expect(Tok::kIdent, "an outcome variable");
    c.outcome_var = outcome.text;
    expect(Tok::kBar, "'|' in constraint");
    while (peek().kind == Tok::kIdent || peek().kind == Tok::kComma) {
      const Token& t = next();
      if (t.kind == Tok::kIdent) c.given_vars.push_back(t.text);
    }
    expect(Tok::kRParen, "')' closing the constraint");
    if (c.given_vars.empty()) fail(p, "constraint needs at least one given variable");
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void validate_expr(const PredicateDef& def, const Expr& e) {
  if (e.node != Expr::Node::kCompare) {
    if (e.children.size() < 2)
      throw ValidationError("'" + def.var_name + "': connective needs at least two operands");
    for (const Expr& child : e.children) validate_expr(def, child);
    return;
  }
  if (e.var != def.var_name)
    throw ValidationError("partition '" + render(e) + "' references '" + e.var +
                          "' but belongs to '" + def.var_name + "'");
  const ValueType type = value_type(def.kind);
  const bool equality_op = e.op == CompareOp::kEq || e.op == CompareOp::kNe;
  if (is_null(e.literal)) {
    if (pattern(def.kind) == Pattern::kTrend)
      throw ValidationError("'" + def.var_name + "': NULL tests are not allowed on Trend predicates");
    if (!equality_op)
      throw ValidationError("'" + def.var_name + "': NULL only supports == and !=");
    return;
  }
  if (type == ValueType::kString) {
    if (!is_string(e.literal))
      throw ValidationError("'" + def.var_name + "': " + std::string(kind_name(def.kind)) +
                            " needs string literals");
    if (!equality_op)
      throw ValidationError("'" + def.var_name + "': string predicates only support == and !=");
  } else if (!is_number(e.literal)) {
    throw ValidationError("'" + def.var_name + "': " + std::string(kind_name(def.kind)) +
                          " needs numeric literals");
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void render_defs(const std::vector<PredicateDef>& defs, std::string& out) {
  for (const PredicateDef& d : defs) {
    out += "  ";
    out += d.var_name;
    out += ", ";
    out += kind_name(d.kind);
    out += ", ";
    if (d.threshold) out += format_number(*d.threshold);
    out += ",";
    for (std::size_t i = 0; i < d.partitions.size(); ++i) {
      out += d.partitions.size() > 1 ? "\n      " : " ";
      out += render(d.partitions[i]);
    }
    out += d.partitions.size() > 1 ? "\n    ," : ",";
    if (d.window) {
      out += ' ';
      out += std::to_string(*d.window);
    }
    out += '\n';
  }
}

}  // namespace

ValueType value_type(PredicateKind kind) noexcept { return info(kind).type; }
Pattern pattern(PredicateKind kind) noexcept { return info(kind).pattern; }
std::string_view kind_name(PredicateKind kind) noexcept { return info(kind).name; }

std::optional<PredicateKind> parse_kind(std::string_view name) noexcept {
  for (const KindInfo& k : kKinds)
    if (k.name == name) return k.kind;
  return std::nullopt;
}

std::string_view op_symbol(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::kEq: return "==";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kGt: return ">";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGe: return ">=";
  }
  return "?";
}

Expr Expr::compare(std::string var, CompareOp op, Value literal) {
  Expr e;
  e.node = Node::kCompare;
  e.var = std::move(var);
  e.op = op;
  e.literal = std::move(literal);
  return e;
}

Expr Expr::all_of(std::vector<Expr> children) {
  Expr e;
  e.node = Node::kAnd;
  e.children = std::move(children);
  return e;
}

Expr Expr::any_of(std::vector<Expr> children) {
  Expr e;
  e.node = Node::kOr;
  e.children = std::move(children);
  return e;
}

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

void validate(const PredicateDef& def) {
  const std::string& v = def.var_name;
  if (v.empty()) throw ValidationError("predicate definition without a variable name");
  if (def.partitions.empty())
    throw ValidationError("'" + v + "' declares no partitions");
  const bool trend = pattern(def.kind) == Pattern::kTrend;
  if (trend && !def.window)
    throw ValidationError("'" + v + "': Trend predicate needs a window");
  if (!trend && def.window)
    throw ValidationError("'" + v + "': window is only allowed on Trend predicates");
  if (def.window && *def.window < 2)
    throw ValidationError("'" + v + "': Trend window must be at least 2");
  if (def.threshold) {
    if (def.kind != PredicateKind::kDoubleEq)
      throw ValidationError("'" + v + "': threshold is only allowed on DOUBLE-Eq");
    if (!(*def.threshold >= 0.0) || !std::isfinite(*def.threshold))
      throw ValidationError("'" + v + "': threshold must be a non-negative number");
  }
  std::set<std::string> seen;
  for (const Expr& p : def.partitions) {
    validate_expr(def, p);
    if (!seen.insert(render(p)).second)
      throw ValidationError("'" + v + "': duplicate partition '" + render(p) + "'");
  }
}

void validate(const Specification& spec) {
  if (spec.outcomes.empty()) throw ValidationError("specification has no OUTCOMES");
  if (spec.givens.empty()) throw ValidationError("specification has no GIVENS");
  if (spec.max_givens < 1) throw ValidationError("max_givens must be positive");
  std::set<std::string> outcome_vars;
  std::set<std::string> given_vars;
  for (const PredicateDef& d : spec.outcomes) {
    validate(d);
    if (!outcome_vars.insert(d.var_name).second)
      throw ValidationError("'" + d.var_name + "' declared twice in OUTCOMES");
  }
  for (const PredicateDef& d : spec.givens) {
    validate(d);
    if (!given_vars.insert(d.var_name).second)
      throw ValidationError("'" + d.var_name + "' declared twice in GIVENS");
  }
  for (const Constraint& c : spec.constraints) {
    if (!outcome_vars.contains(c.outcome_var))
      throw ValidationError("constraint names undeclared outcome variable '" + c.outcome_var + "'");
    if (c.given_vars.empty())
      throw ValidationError("constraint on '" + c.outcome_var + "' has no given variables");
    for (const std::string& g : c.given_vars)
      if (!given_vars.contains(g))
        throw ValidationError("constraint names undeclared given variable '" + g + "'");
  }
}

Specification parse_spec(std::string_view text) {
  Specification spec = Parser(Lexer(text).run()).run();
  validate(spec);
  return spec;
}

Specification load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open specification '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string render_spec(const Specification& spec) {
  std::string out;
  if (spec.max_givens != kDefaultMaxGivens) {
    out += std::string(kMaxGivens) + " " + std::to_string(spec.max_givens) + "\n";
  }
  out += "OUTCOMES\n";
  render_defs(spec.outcomes, out);
  out += "GIVENS\n";
  render_defs(spec.givens, out);
  out += "CONSTRAINTS\n";
  for (const Constraint& c : spec.constraints) {
    out += "  P(" + c.outcome_var + " |";
    for (const std::string& g : c.given_vars) out += " " + g;
    out += ")\n";
  }
  return out;
}

std::string spec_digest(const Specification& spec) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::uint64_t h = fnv1a(render_spec(spec));
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace condbayes
