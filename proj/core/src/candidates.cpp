#include "condbayes/candidates.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "condbayes/error.hpp"
#include "condbayes/ranking.hpp"

namespace condbayes {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet admitted_pairs(const Specification& spec) {
  PairSet pairs;
  for (const Constraint& c : spec.constraints)
    for (const std::string& g : c.given_vars) pairs.emplace(c.outcome_var, g);
  return pairs;
}

// Given atoms admissible for an outcome on variable `outcome_var`.
std::vector<std::size_t> admissible(const std::vector<Predicate>& given_atoms,
                                    const std::string& outcome_var, const PairSet& pairs,
                                    bool constrained) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < given_atoms.size(); ++j) {
    const std::string& gv = given_atoms[j].var_name;
    if (gv == outcome_var) continue;
    if (constrained && !pairs.contains({outcome_var, gv})) continue;
    out.push_back(j);
  }
  return out;
}

// Number of s-subsets choosing at most one atom per variable, s = 1..max:
// elementary symmetric polynomials of the per-variable atom counts.
std::vector<std::uint64_t> combination_counts(const std::vector<Predicate>& given_atoms,
                                              const std::vector<std::size_t>& admissible_atoms,
                                              int max_givens) {
  std::map<std::string, std::uint64_t> per_var;
  for (std::size_t j : admissible_atoms) ++per_var[given_atoms[j].var_name];
  std::vector<std::uint64_t> e(static_cast<std::size_t>(max_givens) + 1, 0);
  e[0] = 1;
  for (const auto& [var, n] : per_var)
    for (std::size_t s = e.size() - 1; s >= 1; --s) e[s] = sat_add(e[s], sat_mul(e[s - 1], n));
  return {e.begin() + 1, e.end()};
}

}  // namespace

std::vector<std::size_t> CandidateSet::siblings(std::size_t outcome) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < outcome_atoms.size(); ++i)
    if (i != outcome && outcome_family[i] == outcome_family[outcome]) out.push_back(i);
  return out;
}

std::vector<Predicate> CandidateSet::givens_of(const Candidate& c) const {
  std::vector<Predicate> out;
  out.reserve(c.givens.size());
  for (std::size_t g : c.givens) out.push_back(given_atoms[g]);
  return out;
}

std::string CandidateSet::id(const Candidate& c) const {
  return invariant_id(outcome_atoms[c.outcome], givens_of(c));
}

SpaceSummary summarize_space(const Specification& spec) {
  validate(spec);
  const PredicateAtoms atoms = expand_predicates(spec);
  const PairSet pairs = admitted_pairs(spec);
  const bool constrained = !spec.constraints.empty();
  SpaceSummary s;
  s.outcome_atoms = atoms.outcomes.size();
  s.given_atoms = atoms.givens.size();
  s.by_size.assign(static_cast<std::size_t>(spec.max_givens), 0);
  for (const Predicate& o : atoms.outcomes) {
    const auto adm = admissible(atoms.givens, o.var_name, pairs, constrained);
    const auto counts = combination_counts(atoms.givens, adm, spec.max_givens);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      s.by_size[k] = sat_add(s.by_size[k], counts[k]);
      s.total = sat_add(s.total, counts[k]);
    }
  }
  return s;
}

CandidateSet enumerate_candidates(const Specification& spec, const EnumerateOptions& options) {
  const SpaceSummary summary = summarize_space(spec);
  if (summary.total > options.cap)
    throw SpaceTooLargeError(static_cast<std::size_t>(std::min<std::uint64_t>(
                                 summary.total, std::numeric_limits<std::size_t>::max())),
                             options.cap);

  CandidateSet set;
  for (std::size_t d = 0; d < spec.outcomes.size(); ++d) {
    for (Predicate& p : expand_definition(spec.outcomes[d], options.expand)) {
      set.outcome_atoms.push_back(std::move(p));
      set.outcome_family.push_back(d);
    }
  }
  for (const PredicateDef& d : spec.givens)
    for (Predicate& p : expand_definition(d, options.expand)) set.given_atoms.push_back(std::move(p));

  const PairSet pairs = admitted_pairs(spec);
  const bool constrained = !spec.constraints.empty();
  set.candidates.reserve(static_cast<std::size_t>(summary.total));

  for (std::size_t o = 0; o < set.outcome_atoms.size(); ++o) {
    const std::string& ov = set.outcome_atoms[o].var_name;
    const auto adm = admissible(set.given_atoms, ov, pairs, constrained);
    std::vector<std::size_t> chosen;
    std::set<std::string_view> used_vars;

    // Depth-first, ascending indices: lexicographic within each size.
    auto emit = [&](auto&& self, std::size_t start, std::size_t size) -> void {
      if (chosen.size() == size) {
        Candidate c;
        c.outcome = o;
        c.givens = chosen;
        if (constrained) {
          for (std::size_t ci = 0; ci < spec.constraints.size(); ++ci) {
            const Constraint& con = spec.constraints[ci];
            if (con.outcome_var != ov) continue;
            for (std::size_t g : chosen) {
              const std::string& gv = set.given_atoms[g].var_name;
              if (std::find(con.given_vars.begin(), con.given_vars.end(), gv) != con.given_vars.end()) {
                c.admitted_by.push_back(ci);
                break;
              }
            }
          }
        }
        set.candidates.push_back(std::move(c));
        return;
      }
      for (std::size_t k = start; k < adm.size(); ++k) {
        const std::string& gv = set.given_atoms[adm[k]].var_name;
        if (used_vars.contains(gv)) continue;
        chosen.push_back(adm[k]);
        used_vars.insert(gv);
        self(self, k + 1, size);
        used_vars.erase(gv);
        chosen.pop_back();
      }
    };
    for (std::size_t size = 1; size <= static_cast<std::size_t>(spec.max_givens); ++size)
      emit(emit, 0, size);
  }
  return set;
}

}  // namespace condbayes
