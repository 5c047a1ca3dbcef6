#include "csv.hpp"

#include "condbayes/error.hpp"

namespace condbayes::csv {

bool read_record(std::istream& in, std::vector<Field>& out, std::size_t& line) {
  out.clear();
  int c = in.get();
  if (c == EOF) return false;
  ++line;
  Field field;
  bool in_quotes = false;
  bool after_quote = false;
  for (;; c = in.get()) {
    if (in_quotes) {
      if (c == EOF) throw FormatError("line " + std::to_string(line) + ": unterminated quoted field");
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.text += '"';
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.text += static_cast<char>(c);
      }
      continue;
    }
    if (c == EOF || c == '\n' || c == ',') {
      if (!field.quoted && !field.text.empty() && field.text.back() == '\r') field.text.pop_back();
      out.push_back(std::move(field));
      field = Field{};
      after_quote = false;
      if (c != ',') return true;
      continue;
    }
    if (c == '\r' && after_quote) continue;
    if (c == '"' && field.text.empty() && !field.quoted) {
      field.quoted = true;
      in_quotes = true;
      continue;
    }
    if (after_quote)
      throw FormatError("line " + std::to_string(line) + ": text after closing quote");
    field.text += static_cast<char>(c);
  }
}

void append_field(std::string& out, std::string_view text, bool force_quote) {
  bool quote = force_quote;
  if (!quote) {
    quote = text.find_first_of(",\"\n\r") != std::string_view::npos ||
            (!text.empty() && (text.front() == ' ' || text.back() == ' '));
  }
  if (!quote) {
    out += text;
    return;
  }
  out += '"';
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace condbayes::csv
