#include "condbayes/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace condbayes {

std::string format_number(double x) {
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), end);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string_view body = text;
  // from_chars rejects a leading '+', which people do write by hand.
  if (body.front() == '+') body.remove_prefix(1);
  if (body.empty()) return std::nullopt;
  // Only plain decimal forms; "inf" or "nan" in a trace is a string label.
  const char lead = body.front() == '-' && body.size() > 1 ? body[1] : body.front();
  if (!(lead == '.' || (lead >= '0' && lead <= '9'))) return std::nullopt;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
  if (ec != std::errc{} || ptr != body.data() + body.size()) return std::nullopt;
  return out;
}

std::string to_string(const Value& v) {
  if (is_null(v)) return "NULL";
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

}  // namespace condbayes
