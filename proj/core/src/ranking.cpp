#include "condbayes/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

constexpr double kRateFloor = 1e-12;

std::string set_key(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  std::string key;
  for (const std::string& id : ids) {
    key += id;
    key += '\x1f';
  }
  return key;
}

}  // namespace

std::string invariant_id(const Predicate& outcome, std::span<const Predicate> givens) {
  std::string id = "P(" + outcome.id + " |";
  for (std::size_t i = 0; i < givens.size(); ++i) {
    id += i == 0 ? " " : ", ";
    id += givens[i].id;
  }
  id += ")";
  return id;
}

double surprise(double posterior, double prior) {
  if (!(prior > 0.0)) throw InputError("surprise needs a positive prior");
  return posterior / prior;
}

std::optional<double> surprise_variance(std::span<const double> history, std::size_t window) {
  const std::size_t m = std::min(history.size(), window);
  if (m < 2) return std::nullopt;
  const auto tail = history.last(m);
  double mean = 0.0;
  for (double x : tail) mean += x;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double x : tail) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(m - 1);
}

std::optional<double> surprise_variance(std::span<const SurpriseSample> history,
                                        std::size_t window) {
  std::vector<double> values;
  values.reserve(history.size());
  for (const SurpriseSample& s : history) values.push_back(s.surprise);
  return surprise_variance(std::span<const double>(values), window);
}

double bernoulli_log_likelihood(std::uint64_t n, std::uint64_t successes, double rate) {
  const double r = std::clamp(rate, kRateFloor, 1.0 - kRateFloor);
  const double s = static_cast<double>(successes);
  const double f = static_cast<double>(n - successes);
  return s * std::log(r) + f * std::log1p(-r);
}

double bic(std::uint64_t n, int k, double posterior, std::uint64_t successes) {
  if (n < 1) throw InputError("BIC needs at least one observation");
  if (successes > n) throw InputError("BIC successes exceed observations");
  return std::log(static_cast<double>(n)) * k -
         2.0 * bernoulli_log_likelihood(n, successes, posterior);
}

std::vector<Invariant> select_models(std::vector<Invariant> candidates,
                                     std::vector<Invariant>* pruned) {
  // outcome id -> (sorted given-id set -> BIC)
  std::map<std::string, std::unordered_map<std::string, double>> index;
  std::vector<std::vector<std::string>> given_ids(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (const Predicate& g : candidates[i].givens) given_ids[i].push_back(g.id);
    index[candidates[i].outcome.id][set_key(given_ids[i])] = candidates[i].bic;
  }

  std::vector<Invariant> kept;
  kept.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& ids = given_ids[i];
    const auto& group = index[candidates[i].outcome.id];
    bool keep = true;
    if (ids.size() > 1 && ids.size() < 31) {
      const std::uint32_t full = (1u << ids.size()) - 1;
      for (std::uint32_t mask = 1; mask < full && keep; ++mask) {
        std::vector<std::string> subset;
        for (std::size_t b = 0; b < ids.size(); ++b)
          if (mask & (1u << b)) subset.push_back(ids[b]);
        auto found = group.find(set_key(std::move(subset)));
        if (found != group.end() && !(candidates[i].bic < found->second)) keep = false;
      }
    }
    if (keep) {
      kept.push_back(std::move(candidates[i]));
    } else if (pruned != nullptr) {
      pruned->push_back(std::move(candidates[i]));
    }
  }
  return kept;
}

void rank(std::vector<Invariant>& invariants, RankKey key) {
  auto primary = [key](const Invariant& inv) {
    return key == RankKey::kSurprise ? inv.surprise : inv.result.posterior;
  };
  std::stable_sort(invariants.begin(), invariants.end(),
                   [&](const Invariant& a, const Invariant& b) {
                     const double pa = primary(a);
                     const double pb = primary(b);
                     if (pa != pb) return pa > pb;
                     if (a.result.posterior != b.result.posterior)
                       return a.result.posterior > b.result.posterior;
                     return a.id < b.id;
                   });
}

}  // namespace condbayes
