#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace condbayes::csv {

struct Field {
  std::string text;
  bool quoted = false;
};

// Reads one RFC 4180 record (quoted fields may span lines). Returns false at
// end of input. `line` is advanced by the number of physical lines consumed.
bool read_record(std::istream& in, std::vector<Field>& out, std::size_t& line);

// Appends `text` to `out`, quoting when `force_quote` or when the text holds a
// separator, quote, line break or surrounding blank.
void append_field(std::string& out, std::string_view text, bool force_quote = false);

}  // namespace condbayes::csv
