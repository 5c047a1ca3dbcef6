#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "condbayes/inference.hpp"

namespace condbayes {

// Outcome-atom priors keyed by predicate id. Ordered, so serialisation and
// iteration are deterministic.
class PriorStore {
 public:
  void set(PriorEntry entry);
  const PriorEntry* find(std::string_view id) const;
  const PriorEntry& at(std::string_view id) const;  // throws InputError if absent
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const PriorStore&) const = default;

 private:
  std::map<std::string, PriorEntry, std::less<>> entries_;
};

// Text format, one entry per line after a "# condbayes priors v1" header:
//   <probability> TAB <supporting_timesteps> TAB <predicate id>
PriorStore read_priors(std::istream& in, std::string_view name = "<stream>");
void write_priors(const PriorStore& store, std::ostream& out);
PriorStore load_priors(const std::filesystem::path& path);
void save_priors(const PriorStore& store, const std::filesystem::path& path);

}  // namespace condbayes
