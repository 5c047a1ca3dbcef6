// Decides whether a predicate definition's partitions cover the variable's
// whole (non-NULL) domain. Numeric partitions are reduced to unions of
// intervals, string partitions to finite or cofinite sets.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "condbayes/spec.hpp"

namespace condbayes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo;
  bool lo_closed;
  double hi;
  bool hi_closed;
};

// Union of disjoint intervals, sorted. In integer mode each integer k is
// represented by the cell [k - 0.5, k + 0.5] and all finite ends are closed,
// so adjacent integer runs merge.
class IntervalSet {
 public:
  explicit IntervalSet(bool integer) : integer_(integer) {}

  static IntervalSet full(bool integer) {
    IntervalSet s(integer);
    s.parts_.push_back({-kInf, false, kInf, false});
    return s;
  }

  static IntervalSet single(bool integer, Interval iv) {
    IntervalSet s(integer);
    s.parts_.push_back(iv);
    s.normalize();
    return s;
  }

  bool covers_everything() const {
    return parts_.size() == 1 && parts_[0].lo == -kInf && parts_[0].hi == kInf;
  }

  IntervalSet unite(const IntervalSet& other) const {
    IntervalSet s(integer_);
    s.parts_ = parts_;
    s.parts_.insert(s.parts_.end(), other.parts_.begin(), other.parts_.end());
    s.normalize();
    return s;
  }

  IntervalSet intersect(const IntervalSet& other) const {
    IntervalSet s(integer_);
    for (const Interval& a : parts_) {
      for (const Interval& b : other.parts_) {
        Interval c{};
        if (a.lo > b.lo || (a.lo == b.lo && !a.lo_closed)) {
          c.lo = a.lo;
          c.lo_closed = a.lo_closed;
        } else {
          c.lo = b.lo;
          c.lo_closed = b.lo_closed;
        }
        if (a.hi < b.hi || (a.hi == b.hi && !a.hi_closed)) {
          c.hi = a.hi;
          c.hi_closed = a.hi_closed;
        } else {
          c.hi = b.hi;
          c.hi_closed = b.hi_closed;
        }
        s.parts_.push_back(c);
      }
    }
    s.normalize();
    return s;
  }

  IntervalSet complement() const {
    IntervalSet s(integer_);
    double cursor = -kInf;
    bool cursor_closed = false;
    for (const Interval& p : parts_) {
      s.parts_.push_back({cursor, cursor_closed, p.lo, !p.lo_closed});
      cursor = p.hi;
      cursor_closed = !p.hi_closed;
    }
    s.parts_.push_back({cursor, cursor_closed, kInf, false});
    s.normalize();
    return s;
  }

 private:
  static bool empty(const Interval& iv) {
    if (iv.lo > iv.hi) return true;
    if (iv.lo == iv.hi) return !(iv.lo_closed && iv.hi_closed) || std::isinf(iv.lo);
    return false;
  }

  void normalize() {
    std::vector<Interval> kept;
    for (Interval iv : parts_) {
      if (integer_) {
        if (std::isfinite(iv.lo)) iv.lo_closed = true;
        if (std::isfinite(iv.hi)) iv.hi_closed = true;
        // A degenerate half-integer point holds no integer.
        if (iv.lo == iv.hi && std::isfinite(iv.lo)) continue;
      }
      if (!empty(iv)) kept.push_back(iv);
    }
    std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    parts_.clear();
    for (const Interval& iv : kept) {
      if (!parts_.empty()) {
        Interval& last = parts_.back();
        const bool touches =
            iv.lo < last.hi || (iv.lo == last.hi && (last.hi_closed || iv.lo_closed));
        if (touches) {
          if (iv.hi > last.hi || (iv.hi == last.hi && iv.hi_closed)) {
            last.hi = iv.hi;
            last.hi_closed = iv.hi_closed;
          }
          continue;
        }
      }
      parts_.push_back(iv);
    }
  }

  bool integer_;
  std::vector<Interval> parts_;
};

// A finite set of strings, or the complement of one.
struct StringSet {
  bool cofinite = false;
  std::set<std::string> items;

  static StringSet full() { return {true, {}}; }

  StringSet complement() const { return {!cofinite, items}; }

  StringSet unite(const StringSet& o) const {
    if (!cofinite && !o.cofinite) return {false, merged(items, o.items)};
    if (cofinite && o.cofinite) return {true, common(items, o.items)};
    const StringSet& fin = cofinite ? o : *this;
    const StringSet& cof = cofinite ? *this : o;
    return {true, minus(cof.items, fin.items)};
  }

  StringSet intersect(const StringSet& o) const {
    return complement().unite(o.complement()).complement();
  }

  bool covers_everything() const { return cofinite && items.empty(); }

 private:
  static std::set<std::string> merged(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out = a;
    out.insert(b.begin(), b.end());
    return out;
  }
  static std::set<std::string> common(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& s : a)
      if (b.contains(s)) out.insert(s);
    return out;
  }
  static std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& s : a)
      if (!b.contains(s)) out.insert(s);
    return out;
  }
};

IntervalSet numeric_compare(bool integer, CompareOp op, double c, double delta) {
  if (integer) {
    auto cell = [](double lo, double hi) {
      return Interval{lo - 0.5, true, hi + 0.5, true};
    };
    switch (op) {
      case CompareOp::kLt: return IntervalSet::single(true, cell(-kInf, std::ceil(c) - 1));
      case CompareOp::kLe: return IntervalSet::single(true, cell(-kInf, std::floor(c)));
      case CompareOp::kGt: return IntervalSet::single(true, cell(std::floor(c) + 1, kInf));
      case CompareOp::kGe: return IntervalSet::single(true, cell(std::ceil(c), kInf));
      case CompareOp::kEq:
      case CompareOp::kNe: {
        IntervalSet eq(true);
        if (std::floor(c) == c) eq = IntervalSet::single(true, cell(c, c));
        return op == CompareOp::kEq ? eq : eq.complement();
      }
    }
  }
  switch (op) {
    case CompareOp::kLt: return IntervalSet::single(false, {-kInf, false, c, false});
    case CompareOp::kLe: return IntervalSet::single(false, {-kInf, false, c, true});
    case CompareOp::kGt: return IntervalSet::single(false, {c, false, kInf, false});
    case CompareOp::kGe: return IntervalSet::single(false, {c, true, kInf, false});
    case CompareOp::kEq:
    case CompareOp::kNe: {
      IntervalSet eq = IntervalSet::single(false, {c - delta, true, c + delta, true});
      return op == CompareOp::kEq ? eq : eq.complement();
    }
  }
  return IntervalSet(integer);
}

IntervalSet numeric_set(const Expr& e, bool integer, double delta) {
  switch (e.node) {
    case Expr::Node::kCompare:
      if (is_null(e.literal)) {
        return e.op == CompareOp::kNe ? IntervalSet::full(integer) : IntervalSet(integer);
      }
      return numeric_compare(integer, e.op, std::get<double>(e.literal), delta);
    case Expr::Node::kAnd: {
      IntervalSet acc = IntervalSet::full(integer);
      for (const Expr& c : e.children) acc = acc.intersect(numeric_set(c, integer, delta));
      return acc;
    }
    case Expr::Node::kOr: {
      IntervalSet acc(integer);
      for (const Expr& c : e.children) acc = acc.unite(numeric_set(c, integer, delta));
      return acc;
    }
  }
  return IntervalSet(integer);
}

StringSet string_set(const Expr& e) {
  switch (e.node) {
    case Expr::Node::kCompare: {
      if (is_null(e.literal)) return e.op == CompareOp::kNe ? StringSet::full() : StringSet{};
      StringSet eq{false, {std::get<std::string>(e.literal)}};
      return e.op == CompareOp::kEq ? eq : eq.complement();
    }
    case Expr::Node::kAnd: {
      StringSet acc = StringSet::full();
      for (const Expr& c : e.children) acc = acc.intersect(string_set(c));
      return acc;
    }
    case Expr::Node::kOr: {
      StringSet acc;
      for (const Expr& c : e.children) acc = acc.unite(string_set(c));
      return acc;
    }
  }
  return {};
}

}  // namespace

bool partitions_cover_domain(const PredicateDef& def) {
  if (value_type(def.kind) == ValueType::kString) {
    StringSet acc;
    for (const Expr& p : def.partitions) acc = acc.unite(string_set(p));
    return acc.covers_everything();
  }
  // A Trend derivative is real-valued even for integer variables.
  const bool integer = value_type(def.kind) == ValueType::kInt && pattern(def.kind) != Pattern::kTrend;
  const double delta = def.threshold.value_or(0.0);
  IntervalSet acc(integer);
  for (const Expr& p : def.partitions) acc = acc.unite(numeric_set(p, integer, delta));
  return acc.covers_everything();
}

}  // namespace condbayes
