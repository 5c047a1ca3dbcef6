#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condbayes/value.hpp"

namespace condbayes {

// One raw observation before wrangling; variables need not be aligned.
struct RawEvent {
  double timestamp = 0.0;
  std::string var_name;
  Value value;
};

enum class ColumnType { kNumeric, kString };

// Uniform-timestep table: record i is observed at time i * timestep. Stored
// column-major so a variable's window is a contiguous span. Immutable after
// construction.
class Trace {
 public:
  Trace() = default;

  // Throws TypeConflictError when a column mixes numbers and strings, and
  // FormatError on ragged columns or duplicate variable names.
  Trace(double timestep, std::vector<std::string> variables,
        std::vector<std::vector<Value>> columns, std::int64_t first_index = 0);

  double timestep() const noexcept { return timestep_; }
  std::size_t size() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_ == 0; }
  std::int64_t first_index() const noexcept { return first_index_; }

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::optional<std::size_t> column_index(std::string_view var) const;

  std::span<const Value> column(std::size_t c) const { return columns_[c]; }
  ColumnType column_type(std::size_t c) const { return types_[c]; }
  const Value& at(std::size_t row, std::size_t c) const { return columns_[c][row]; }

  bool operator==(const Trace&) const = default;

 private:
  double timestep_ = 1.0;
  std::int64_t first_index_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::string> variables_;
  std::vector<std::vector<Value>> columns_;
  std::vector<ColumnType> types_;
};

// Resamples raw events onto a uniform grid from the first to the last event
// time. Numeric variables are linearly interpolated between observations,
// string variables carry the last observation forward, and a variable with no
// observation yet is NULL. After a variable's last observation its value is
// carried forward. An empty `variables` list means every variable seen, in
// order of first appearance.
//
// Throws EmptyTraceError without events, TypeConflictError when a variable
// mixes numbers and strings, InputError for a non-positive timestep.
Trace wrangle(std::span<const RawEvent> events, double timestep,
              std::span<const std::string> variables = {});

// Canonical table: optional "# timestep=<sec>" line, header "t,<vars...>",
// one row per record with an integer index; an empty cell is NULL.
Trace read_trace(std::istream& in, std::string_view name = "<stream>");
void write_trace(const Trace& trace, std::ostream& out);
Trace load_trace(const std::filesystem::path& path);
void store_trace(const Trace& trace, const std::filesystem::path& path);

// Event table with header "timestamp,variable,value".
std::vector<RawEvent> read_events(std::istream& in, std::string_view name = "<stream>");
std::vector<RawEvent> load_events(const std::filesystem::path& path);

}  // namespace condbayes
