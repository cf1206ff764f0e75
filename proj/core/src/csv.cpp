#include "seedmap/csv.hpp"

#include <fstream>
#include <sstream>

#include "seedmap/error.hpp"

namespace seedmap::csv {
namespace {

std::string location(std::string_view source, std::size_t line) {
  std::ostringstream out;
  if (!source.empty()) out << source << ":";
  out << "line " << line;
  return out.str();
}

}  // namespace

Table parse_string(std::string_view text, std::string_view source_name) {
  Table table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_data = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        throw ParseError(location(source_name, record_line) + ": expected " +
                         std::to_string(table.header.size()) + " fields, got " +
                         std::to_string(record.size()));
      }
      table.rows.push_back(std::move(record));
      table.row_lines.push_back(record_line);
    }
    record.clear();
    record_has_data = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError(location(source_name, line) +
                           ": quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_data = true;
        break;
      case ',':
        end_field();
        record_has_data = true;
        break;
      case '\r':
        // handled with the following \n; a bare \r is treated as data
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        if (record_has_data || !field.empty() || !record.empty()) end_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(c);
        record_has_data = true;
        break;
    }
  }
  if (in_quotes) {
    throw ParseError(location(source_name, record_line) +
                     ": unterminated quoted field");
  }
  if (record_has_data || !field.empty() || !record.empty()) end_record();
  return table;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

std::string escape_field(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace seedmap::csv
