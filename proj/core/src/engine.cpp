#include "condbayes/engine.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

constexpr std::uint8_t kFalse = static_cast<std::uint8_t>(Truth::kFalse);
constexpr std::uint8_t kTrue = static_cast<std::uint8_t>(Truth::kTrue);
constexpr std::uint8_t kUndef = static_cast<std::uint8_t>(Truth::kUndefined);

// The last `cap` values of one variable, always readable as one contiguous
// span: each value is written twice, cap slots apart.
class Ring {
 public:
  explicit Ring(std::size_t cap) : cap_(cap), buf_(2 * cap) {}

  void push(const Value& v) {
    buf_[head_] = v;
    buf_[head_ + cap_] = v;
    head_ = head_ + 1 == cap_ ? 0 : head_ + 1;
    filled_ = std::min(filled_ + 1, cap_);
  }

  std::span<const Value> recent() const {
    return {buf_.data() + head_ + cap_ - filled_, filled_};
  }

 private:
  std::size_t cap_;
  std::vector<Value> buf_;
  std::size_t head_ = 0;
  std::size_t filled_ = 0;
};

struct Compiled {
  std::uint32_t outcome = 0;
  std::uint32_t given_begin = 0;
  std::uint32_t given_end = 0;
  std::uint32_t sib_begin = 0;
  std::uint32_t sib_end = 0;
};

struct Plan {
  std::vector<const Predicate*> atoms;  // unique by id
  std::vector<std::size_t> atom_ring;   // ring index per atom
  std::vector<std::size_t> ring_column; // source column per ring
  std::vector<std::size_t> ring_cap;
  std::vector<std::uint32_t> outcome_slot;  // per outcome atom
  std::vector<Compiled> compiled;
  std::vector<std::uint32_t> flat;  // given and sibling slots
};

Plan make_plan(const CandidateSet& set, const RecordSource& source) {
  Plan plan;
  std::map<std::string, std::uint32_t, std::less<>> slot_of;
  auto intern = [&](const Predicate& p) {
    auto [it, inserted] = slot_of.try_emplace(p.id, static_cast<std::uint32_t>(plan.atoms.size()));
    if (inserted) plan.atoms.push_back(&p);
    return it->second;
  };
  for (const Predicate& p : set.outcome_atoms) plan.outcome_slot.push_back(intern(p));
  std::vector<std::uint32_t> given_slot;
  for (const Predicate& p : set.given_atoms) given_slot.push_back(intern(p));

  std::map<std::string, std::size_t, std::less<>> ring_of;
  const auto& vars = source.variables();
  for (const Predicate* p : plan.atoms) {
    auto it = ring_of.find(p->var_name);
    if (it == ring_of.end()) {
      const auto col = std::find(vars.begin(), vars.end(), p->var_name);
      if (col == vars.end())
        throw TraceMismatchError("trace '" + std::string(source.name()) + "' has no variable '" +
                                 p->var_name + "'");
      it = ring_of.emplace(p->var_name, plan.ring_column.size()).first;
      plan.ring_column.push_back(static_cast<std::size_t>(col - vars.begin()));
      plan.ring_cap.push_back(1);
    }
    plan.atom_ring.push_back(it->second);
    plan.ring_cap[it->second] = std::max(plan.ring_cap[it->second], p->span());
  }

  std::vector<std::vector<std::size_t>> sibling_cache(set.outcome_atoms.size());
  for (std::size_t o = 0; o < set.outcome_atoms.size(); ++o) sibling_cache[o] = set.siblings(o);

  plan.compiled.reserve(set.candidates.size());
  for (const Candidate& c : set.candidates) {
    Compiled k;
    k.outcome = plan.outcome_slot[c.outcome];
    k.given_begin = static_cast<std::uint32_t>(plan.flat.size());
    for (std::size_t g : c.givens) plan.flat.push_back(given_slot[g]);
    k.given_end = static_cast<std::uint32_t>(plan.flat.size());
    k.sib_begin = k.given_end;
    for (std::size_t s : sibling_cache[c.outcome]) plan.flat.push_back(plan.outcome_slot[s]);
    k.sib_end = static_cast<std::uint32_t>(plan.flat.size());
    plan.compiled.push_back(k);
  }
  return plan;
}

void count_range(const Plan& plan, const std::uint8_t* states, std::size_t rows, std::size_t width,
                 bool exclude_undefined, std::size_t lo, std::size_t hi, TraceCounts& out) {
  const std::uint32_t* flat = plan.flat.data();
  for (std::size_t c = lo; c < hi; ++c) {
    const Compiled& k = plan.compiled[c];
    FrequencyCounts& fc = out.counts[c];
    PartitionCounts& pc = out.partitions[c];
    const bool partitioned = k.sib_end > k.sib_begin;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::uint8_t* row = states + r * width;
      const std::uint8_t o = row[k.outcome];
      if (o == kUndef) continue;
      bool g = true;
      bool skip = false;
      for (std::uint32_t i = k.given_begin; i < k.given_end; ++i) {
        const std::uint8_t s = row[flat[i]];
        if (s == kTrue) continue;
        g = false;
        if (!exclude_undefined) break;
        if (s == kUndef) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      const bool ob = o == kTrue;
      ++fc.n;
      fc.freq_O += ob;
      fc.freq_G += g;
      fc.freq_OandG += ob && g;
      fc.freq_G_and_notO += !ob && g;
      if (!partitioned) continue;
      unsigned held = ob ? 1u : 0u;
      for (std::uint32_t i = k.sib_begin; i < k.sib_end; ++i) {
        if (row[flat[i]] != kTrue) continue;
        ++held;
        TermCounts& t = pc.siblings[i - k.sib_begin];
        ++t.freq;
        t.freq_and_G += g;
      }
      if (held == 0) {
        ++pc.residual.freq;
        pc.residual.freq_and_G += g;
      }
      pc.overlaps += held > 1;
    }
  }
}

}  // namespace

bool TraceSource::next(std::span<Value> out) {
  if (row_ >= trace_->size()) return false;
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = trace_->at(row_, c);
  ++row_;
  return true;
}

std::size_t max_window(const CandidateSet& set) {
  std::size_t w = 1;
  for (const Predicate& p : set.outcome_atoms) w = std::max(w, p.span());
  for (const Predicate& p : set.given_atoms) w = std::max(w, p.span());
  return w;
}

TraceCounts count_all(const CandidateSet& set, RecordSource& source, const EngineOptions& options) {
  const Plan plan = make_plan(set, source);
  const std::size_t width = plan.atoms.size();
  const std::size_t block = std::max<std::size_t>(options.block, 1);
  const bool exclude = options.policy == UndefinedPolicy::kExcludeTimestep;

  TraceCounts out;
  out.counts.resize(set.candidates.size());
  out.partitions.resize(set.candidates.size());
  for (std::size_t c = 0; c < set.candidates.size(); ++c) {
    const Compiled& k = plan.compiled[c];
    out.partitions[c].siblings.resize(k.sib_end - k.sib_begin);
  }
  out.outcome_tallies.resize(set.outcome_atoms.size());

  std::vector<Ring> rings;
  rings.reserve(plan.ring_cap.size());
  for (std::size_t cap : plan.ring_cap) rings.emplace_back(cap);

  std::vector<Value> record(source.variables().size());
  std::vector<std::uint8_t> states(block * width);
  const unsigned threads = std::max(1u, options.threads);

  for (bool more = true; more;) {
    std::size_t rows = 0;
    while (rows < block) {
      if (!source.next(record)) {
        more = false;
        break;
      }
      for (std::size_t r = 0; r < rings.size(); ++r) rings[r].push(record[plan.ring_column[r]]);
      std::uint8_t* row = states.data() + rows * width;
      for (std::size_t a = 0; a < width; ++a)
        row[a] = static_cast<std::uint8_t>(evaluate(*plan.atoms[a], rings[plan.atom_ring[a]].recent()));
      ++rows;
    }
    if (rows == 0) break;
    out.records += rows;

    for (std::size_t o = 0; o < plan.outcome_slot.size(); ++o) {
      AtomTally& t = out.outcome_tallies[o];
      for (std::size_t r = 0; r < rows; ++r) {
        const std::uint8_t s = states[r * width + plan.outcome_slot[o]];
        t.evaluable += s != kUndef;
        t.held += s == kTrue;
      }
    }

    const std::size_t n = plan.compiled.size();
    if (threads == 1 || n < 2 * threads) {
      count_range(plan, states.data(), rows, width, exclude, 0, n, out);
    } else {
      // Candidates are independent, so chunking cannot change any count.
      std::vector<std::jthread> pool;
      const std::size_t chunk = (n + threads - 1) / threads;
      for (std::size_t lo = 0; lo < n; lo += chunk) {
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi] { count_range(plan, states.data(), rows, width, exclude, lo, hi, out); });
      }
    }
  }
  (void)kFalse;
  return out;
}

}  // namespace condbayes
