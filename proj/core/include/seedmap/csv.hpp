#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seedmap::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // physical line each data row started on (1-based), for error messages
  std::vector<std::size_t> row_lines;
};

/// RFC 4180 parser. Accepts LF and CRLF line endings and quoted fields
/// containing commas, quotes ("") and newlines. Throws ParseError with the
/// line number of the offending record.
Table parse_string(std::string_view text, std::string_view source_name = "");
Table parse_file(const std::string& path);

/// Quotes the field if it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

}  // namespace seedmap::csv
