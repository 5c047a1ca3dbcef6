#include "condbayes/prior_store.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "condbayes/error.hpp"

namespace condbayes {
namespace {

constexpr std::string_view kHeader = "# condbayes priors v1";

}  // namespace

void PriorStore::set(PriorEntry entry) {
  std::string key = entry.predicate_id;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

const PriorEntry* PriorStore::find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

const PriorEntry& PriorStore::at(std::string_view id) const {
  const PriorEntry* e = find(id);
  if (e == nullptr) throw InputError("no prior for predicate '" + std::string(id) + "'");
  return *e;
}

PriorStore read_priors(std::istream& in, std::string_view name) {
  const std::string where(name);
  PriorStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw FormatError(where + ":" + std::to_string(lineno) + ": expected three tab-separated fields");
    const auto p = parse_number(std::string_view(line).substr(0, tab1));
    std::uint64_t support = 0;
    const char* first = line.data() + tab1 + 1;
    const char* last = line.data() + tab2;
    auto [ptr, ec] = std::from_chars(first, last, support);
    if (!p || !(*p >= 0.0 && *p <= 1.0) || ec != std::errc{} || ptr != last)
      throw FormatError(where + ":" + std::to_string(lineno) + ": malformed prior entry");
    PriorEntry e{line.substr(tab2 + 1), *p, support};
    if (e.predicate_id.empty())
      throw FormatError(where + ":" + std::to_string(lineno) + ": empty predicate id");
    store.set(std::move(e));
  }
  return store;
}

void write_priors(const PriorStore& store, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& [id, e] : store)
    out << format_number(e.probability) << '\t' << e.supporting_timesteps << '\t' << id << '\n';
}

PriorStore load_priors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open priors '" + path.string() + "'");
  return read_priors(in, path.string());
}

void save_priors(const PriorStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write priors '" + path.string() + "'");
  write_priors(store, out);
}

}  // namespace condbayes
