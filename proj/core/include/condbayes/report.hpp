#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include "condbayes/ranking.hpp"

namespace condbayes {

enum class ReportFormat { kCsv, kText };

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept;

// Ranked invariants, at most `top` rows (all when unset; 0 gives the header
// alone). Numbers are printed in shortest round-trip form, so the output is
// a pure function of the input.
//   rank, invariant_id, outcome, givens, posterior, prior, surprise,
//   surprise_variance, bic, k, n, freq_O, freq_G, freq_OandG, freq_G_and_notO
void write_report(std::span<const Invariant> ranked, std::ostream& out,
                  ReportFormat format = ReportFormat::kCsv,
                  std::optional<std::size_t> top = std::nullopt);

// Candidates without a reported posterior, with their reason code.
void write_dropped(std::span<const Invariant> dropped, std::ostream& out,
                   ReportFormat format = ReportFormat::kCsv);

// "<report>.dropped.csv" (or ".dropped.txt") next to the report.
std::filesystem::path dropped_path(const std::filesystem::path& report, ReportFormat format);

}  // namespace condbayes
