#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "condbayes/predicate.hpp"
#include "condbayes/spec.hpp"

namespace condbayes {

struct Candidate {
  std::size_t outcome = 0;           // index into CandidateSet::outcome_atoms
  std::vector<std::size_t> givens;   // ascending indices into CandidateSet::given_atoms
  std::vector<std::size_t> admitted_by;  // constraint indices; empty when unconstrained

  bool operator==(const Candidate&) const = default;
};

// The constrained cross product of outcome atoms and given-atom combinations.
struct CandidateSet {
  std::vector<Predicate> outcome_atoms;
  std::vector<Predicate> given_atoms;
  std::vector<std::size_t> outcome_family;  // outcome definition index per outcome atom
  std::vector<Candidate> candidates;

  // Other atoms declared by the same outcome definition.
  std::vector<std::size_t> siblings(std::size_t outcome) const;
  std::string id(const Candidate& c) const;
  std::vector<Predicate> givens_of(const Candidate& c) const;
};

inline constexpr std::size_t kDefaultCandidateCap = 10'000'000;

struct EnumerateOptions {
  std::size_t cap = kDefaultCandidateCap;
  ExpandOptions expand;
};

// Every (outcome atom, given-atom combination of size 1..max_givens) that the
// constraints admit, with no variable repeated inside a candidate. Ordered by
// outcome atom, then combination size, then lexicographically.
// Throws SpaceTooLargeError, carrying the exact pre-count, above the cap.
CandidateSet enumerate_candidates(const Specification& spec, const EnumerateOptions& options = {});

// Pre-count without materialising anything.
struct SpaceSummary {
  std::size_t outcome_atoms = 0;
  std::size_t given_atoms = 0;
  std::vector<std::uint64_t> by_size;  // index s-1 holds the number of candidates with s givens
  std::uint64_t total = 0;
};

SpaceSummary summarize_space(const Specification& spec);

}  // namespace condbayes
