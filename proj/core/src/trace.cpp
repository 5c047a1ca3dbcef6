#include "condbayes/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "condbayes/error.hpp"
#include "csv.hpp"

namespace condbayes {

Trace::Trace(double timestep, std::vector<std::string> variables,
             std::vector<std::vector<Value>> columns, std::int64_t first_index)
    : timestep_(timestep),
      first_index_(first_index),
      variables_(std::move(variables)),
      columns_(std::move(columns)) {
  if (!(timestep_ > 0.0) || !std::isfinite(timestep_))
    throw InputError("trace timestep must be positive");
  if (columns_.size() != variables_.size())
    throw FormatError("trace has " + std::to_string(variables_.size()) + " variables but " +
                      std::to_string(columns_.size()) + " columns");
  std::set<std::string_view> seen;
  for (const std::string& v : variables_) {
    if (v.empty()) throw FormatError("trace variable with empty name");
    if (!seen.insert(v).second) throw FormatError("duplicate trace variable '" + v + "'");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  types_.reserve(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].size() != rows_) throw FormatError("ragged trace column '" + variables_[c] + "'");
    bool numbers = false;
    bool strings = false;
    for (const Value& v : columns_[c]) {
      numbers |= is_number(v);
      strings |= is_string(v);
    }
    if (numbers && strings)
      throw TypeConflictError("variable '" + variables_[c] + "' mixes numeric and string values");
    types_.push_back(strings ? ColumnType::kString : ColumnType::kNumeric);
  }
}

std::optional<std::size_t> Trace::column_index(std::string_view var) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == var) return i;
  return std::nullopt;
}

namespace {

struct Observation {
  double time;
  Value value;
};

// Value of one variable at time t from its time-sorted observations.
Value sample(const std::vector<Observation>& obs, bool numeric, double t) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  // First observation strictly after t (within tolerance).
  auto right = std::upper_bound(obs.begin(), obs.end(), t + tol,
                                [](double x, const Observation& o) { return x < o.time; });
  if (right == obs.begin()) return Null{};
  const Observation& left = *std::prev(right);
  if (!numeric || right == obs.end() || std::abs(left.time - t) <= tol) return left.value;
  if (is_null(left.value) || is_null(right->value)) return left.value;
  const double vl = std::get<double>(left.value);
  const double vr = std::get<double>(right->value);
  const double frac = (t - left.time) / (right->time - left.time);
  const double v = vl + (vr - vl) * frac;
  return std::clamp(v, std::min(vl, vr), std::max(vl, vr));
}

std::vector<std::string> read_header(const std::vector<csv::Field>& fields) {
  std::vector<std::string> out;
  out.reserve(fields.size());
  for (const csv::Field& f : fields) out.push_back(f.text);
  return out;
}

}  // namespace

Trace wrangle(std::span<const RawEvent> events, double timestep,
              std::span<const std::string> variables) {
  if (!(timestep > 0.0) || !std::isfinite(timestep))
    throw InputError("timestep must be a positive number");
  if (events.empty()) throw EmptyTraceError("no events to wrangle");

  std::vector<std::string> vars(variables.begin(), variables.end());
  std::map<std::string, std::vector<Observation>, std::less<>> by_var;
  for (const RawEvent& e : events) {
    if (!(e.timestamp >= 0.0) || !std::isfinite(e.timestamp))
      throw InputError("event timestamp must be finite and non-negative");
    auto [it, inserted] = by_var.try_emplace(e.var_name);
    if (inserted && variables.empty()) vars.push_back(e.var_name);
    it->second.push_back({e.timestamp, e.value});
  }

  double t_min = events.front().timestamp;
  double t_max = t_min;
  for (const RawEvent& e : events) {
    t_min = std::min(t_min, e.timestamp);
    t_max = std::max(t_max, e.timestamp);
  }
  const auto rows = static_cast<std::size_t>(std::floor((t_max - t_min) / timestep + 1e-9)) + 1;

  std::vector<std::vector<Value>> columns;
  columns.reserve(vars.size());
  for (const std::string& var : vars) {
    std::vector<Value> column(rows, Null{});
    auto found = by_var.find(var);
    if (found != by_var.end()) {
      std::vector<Observation>& obs = found->second;
      bool numbers = false;
      bool strings = false;
      for (const Observation& o : obs) {
        numbers |= is_number(o.value);
        strings |= is_string(o.value);
      }
      if (numbers && strings)
        throw TypeConflictError("variable '" + var + "' mixes numeric and string values");
      std::stable_sort(obs.begin(), obs.end(),
                       [](const Observation& a, const Observation& b) { return a.time < b.time; });
      // Several observations at one instant: the last one reported wins.
      std::vector<Observation> dedup;
      for (Observation& o : obs) {
        if (!dedup.empty() && dedup.back().time == o.time)
          dedup.back() = std::move(o);
        else
          dedup.push_back(std::move(o));
      }
      for (std::size_t i = 0; i < rows; ++i) {
        const double t = t_min + static_cast<double>(i) * timestep;
        column[i] = sample(dedup, !strings, t);
      }
    }
    columns.push_back(std::move(column));
  }
  return Trace(timestep, std::move(vars), std::move(columns));
}

Trace read_trace(std::istream& in, std::string_view name) {
  const std::string where(name);
  double timestep = 1.0;
  std::size_t line = 0;
  // Leading comment lines; only "# timestep=<x>" carries meaning.
  while (in.peek() == '#') {
    std::string comment;
    std::getline(in, comment);
    ++line;
    const auto eq = comment.find("timestep=");
    if (eq != std::string::npos) {
      std::string text = comment.substr(eq + 9);
      while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.pop_back();
      const auto parsed = parse_number(text);
      if (!parsed || !(*parsed > 0.0))
        throw FormatError(where + ":" + std::to_string(line) + ": bad timestep '" + text + "'");
      timestep = *parsed;
    }
  }

  std::vector<csv::Field> fields;
  if (!csv::read_record(in, fields, line)) throw EmptyTraceError(where + ": empty trace file");
  if (fields.empty() || fields.front().text != "t")
    throw FormatError(where + ": header must start with column 't'");
  std::vector<std::string> header = read_header(fields);
  const std::size_t width = header.size();
  std::vector<std::string> vars(header.begin() + 1, header.end());

  std::vector<std::vector<csv::Field>> cells(vars.size());
  std::int64_t first_index = 0;
  std::size_t rows = 0;
  while (csv::read_record(in, fields, line)) {
    if (fields.size() == 1 && fields.front().text.empty() && !fields.front().quoted) continue;
    if (fields.size() != width)
      throw FormatError(where + ":" + std::to_string(line) + ": expected " + std::to_string(width) +
                        " fields, found " + std::to_string(fields.size()));
    const auto t = parse_number(fields.front().text);
    if (!t || *t != std::floor(*t))
      throw FormatError(where + ":" + std::to_string(line) + ": timestep index must be an integer");
    const auto index = static_cast<std::int64_t>(*t);
    if (rows == 0) {
      first_index = index;
    } else if (index != first_index + static_cast<std::int64_t>(rows)) {
      throw FormatError(where + ":" + std::to_string(line) +
                        ": timestep indices must increase by one");
    }
    for (std::size_t c = 1; c < width; ++c) cells[c - 1].push_back(std::move(fields[c]));
    ++rows;
  }
  if (rows == 0) throw EmptyTraceError(where + ": trace has a header but no records");

  std::vector<std::vector<Value>> columns(vars.size());
  for (std::size_t c = 0; c < vars.size(); ++c) {
    // A column is numeric unless some cell is quoted or not a number.
    bool strings = false;
    for (const csv::Field& f : cells[c]) {
      if (f.quoted || (!f.text.empty() && !parse_number(f.text))) {
        strings = true;
        break;
      }
    }
    std::vector<Value>& col = columns[c];
    col.reserve(rows);
    for (csv::Field& f : cells[c]) {
      if (f.text.empty() && !f.quoted)
        col.emplace_back(Null{});
      else if (strings)
        col.emplace_back(std::move(f.text));
      else
        col.emplace_back(*parse_number(f.text));
    }
  }
  return Trace(timestep, std::move(vars), std::move(columns), first_index);
}

void write_trace(const Trace& trace, std::ostream& out) {
  std::string buf;
  if (trace.timestep() != 1.0) buf += "# timestep=" + format_number(trace.timestep()) + "\n";
  buf += "t";
  for (const std::string& v : trace.variables()) {
    buf += ',';
    csv::append_field(buf, v);
  }
  buf += '\n';
  for (std::size_t r = 0; r < trace.size(); ++r) {
    buf += std::to_string(trace.first_index() + static_cast<std::int64_t>(r));
    for (std::size_t c = 0; c < trace.variables().size(); ++c) {
      buf += ',';
      const Value& v = trace.at(r, c);
      if (is_null(v)) continue;
      if (const double* d = std::get_if<double>(&v)) {
        buf += format_number(*d);
      } else {
        const std::string& s = std::get<std::string>(v);
        csv::append_field(buf, s, s.empty() || parse_number(s).has_value());
      }
    }
    buf += '\n';
    if (buf.size() > (1u << 16)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open trace '" + path.string() + "'");
  return read_trace(in, path.string());
}

void store_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write trace '" + path.string() + "'");
  write_trace(trace, out);
  if (!out) throw InputError("failed writing trace '" + path.string() + "'");
}

std::vector<RawEvent> read_events(std::istream& in, std::string_view name) {
  const std::string where(name);
  std::size_t line = 0;
  std::vector<csv::Field> fields;
  if (!csv::read_record(in, fields, line)) throw EmptyTraceError(where + ": empty event file");
  if (fields.size() != 3 || fields[0].text != "timestamp" || fields[1].text != "variable" ||
      fields[2].text != "value")
    throw FormatError(where + ": header must be 'timestamp,variable,value'");
  std::vector<RawEvent> events;
  while (csv::read_record(in, fields, line)) {
    if (fields.size() == 1 && fields.front().text.empty() && !fields.front().quoted) continue;
    if (fields.size() != 3)
      throw FormatError(where + ":" + std::to_string(line) + ": expected 3 fields");
    const auto ts = parse_number(fields[0].text);
    if (!ts) throw FormatError(where + ":" + std::to_string(line) + ": bad timestamp");
    RawEvent e;
    e.timestamp = *ts;
    e.var_name = fields[1].text;
    const csv::Field& v = fields[2];
    if (v.text.empty() && !v.quoted) {
      e.value = Null{};
    } else if (v.quoted) {
      e.value = v.text;
    } else if (auto num = parse_number(v.text)) {
      e.value = *num;
    } else {
      e.value = v.text;
    }
    events.push_back(std::move(e));
  }
  if (events.empty()) throw EmptyTraceError(where + ": event file has no events");
  return events;
}

std::vector<RawEvent> load_events(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open event file '" + path.string() + "'");
  return read_events(in, path.string());
}

}  // namespace condbayes
