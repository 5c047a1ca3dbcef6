#include "condbayes/report.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"

namespace condbayes {
namespace {

using Row = std::vector<std::string>;

std::string join_givens(const Invariant& inv) {
  std::string s;
  for (std::size_t i = 0; i < inv.givens.size(); ++i) {
    if (i > 0) s += " & ";
    s += inv.givens[i].id;
  }
  return s;
}

std::string num(double x) { return format_number(x); }
std::string num(std::uint64_t x) { return std::to_string(x); }

void emit(const Row& header, const std::vector<Row>& rows, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    auto line = [&](const Row& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) s += ',';
        csv::append_field(s, r[i]);
      }
      out << s << '\n';
    };
    line(header);
    for (const Row& r : rows) line(r);
    return;
  }
  // Text: left-aligned columns separated by two spaces.
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const Row& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const Row& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s.append(width[c] - r[c].size() + 2, ' ');
    }
    out << s << '\n';
  };
  line(header);
  for (const Row& r : rows) line(r);
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "text") return ReportFormat::kText;
  return std::nullopt;
}

void write_report(std::span<const Invariant> ranked, std::ostream& out, ReportFormat format,
                  std::optional<std::size_t> top) {
  const Row header{"rank",   "invariant_id", "outcome", "givens", "posterior",
                   "prior",  "surprise",     "surprise_variance", "bic", "k",
                   "n",      "freq_O",       "freq_G",  "freq_OandG", "freq_G_and_notO"};
  const std::size_t limit = std::min(ranked.size(), top.value_or(ranked.size()));
  std::vector<Row> rows;
  rows.reserve(limit);
  for (std::size_t i = 0; i < limit; ++i) {
    const Invariant& inv = ranked[i];
    const FrequencyCounts& c = inv.result.counts;
    rows.push_back({std::to_string(i + 1), inv.id, inv.outcome.id, join_givens(inv),
                    num(inv.result.posterior), num(inv.result.prior_used), num(inv.surprise),
                    inv.surprise_variance ? num(*inv.surprise_variance) : std::string(),
                    num(inv.bic), std::to_string(inv.k), num(c.n), num(c.freq_O), num(c.freq_G),
                    num(c.freq_OandG), num(c.freq_G_and_notO)});
  }
  emit(header, rows, out, format);
}

void write_dropped(std::span<const Invariant> dropped, std::ostream& out, ReportFormat format) {
  const Row header{"invariant_id", "outcome", "givens", "reason", "posterior", "prior", "bic",
                   "n", "freq_O", "freq_G", "freq_OandG", "freq_G_and_notO"};
  std::vector<Row> rows;
  rows.reserve(dropped.size());
  for (const Invariant& inv : dropped) {
    const FrequencyCounts& c = inv.result.counts;
    const bool scored = inv.result.reason == ReasonCode::kBicPruned;
    rows.push_back({inv.id, inv.outcome.id, join_givens(inv),
                    std::string(reason_name(inv.result.reason)),
                    scored ? num(inv.result.posterior) : std::string(), num(inv.result.prior_used),
                    scored ? num(inv.bic) : std::string(), num(c.n), num(c.freq_O), num(c.freq_G),
                    num(c.freq_OandG), num(c.freq_G_and_notO)});
  }
  emit(header, rows, out, format);
}

std::filesystem::path dropped_path(const std::filesystem::path& report, ReportFormat format) {
  std::filesystem::path p = report;
  p += format == ReportFormat::kCsv ? ".dropped.csv" : ".dropped.txt";
  return p;
}

}  // namespace condbayes
