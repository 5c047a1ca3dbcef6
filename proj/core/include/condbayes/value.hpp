#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace condbayes {

// NULL is a first-class trace value: it compares equal only to itself.
struct Null {
  friend constexpr bool operator==(Null, Null) noexcept { return true; }
};

// A single trace cell. Integer-typed variables are stored as doubles.
using Value = std::variant<Null, double, std::string>;

inline bool is_null(const Value& v) noexcept { return std::holds_alternative<Null>(v); }
inline bool is_number(const Value& v) noexcept { return std::holds_alternative<double>(v); }
inline bool is_string(const Value& v) noexcept {
  return std::holds_alternative<std::string>(v);
}

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double x);

// Parses the whole of `text` as a double; nullopt if anything is left over.
std::optional<double> parse_number(std::string_view text);

std::string to_string(const Value& v);

}  // namespace condbayes
