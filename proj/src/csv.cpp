#include "tsd/csv.hpp"

#include "tsd/common.hpp"

#include <fstream>
#include <sstream>

namespace tsd::csv {

namespace {

// Splits one logical CSV record starting at `pos` in `text`; supports quoted
// fields with doubled quotes and embedded newlines. Returns the position
// just past the record's terminating newline.
std::size_t parse_record(const std::string& text, std::size_t pos,
                         std::vector<std::string>& fields,
                         const std::string& origin, int line_no) {
  fields.clear();
  std::string field;
  bool quoted = false;
  const std::size_t n = text.size();
  while (pos < n) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < n && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          quoted = false;
          ++pos;
        }
      } else {
        field.push_back(c);
        ++pos;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c == '\r') {
      ++pos;  // swallow; the '\n' (if any) ends the record
      if (pos < n && text[pos] == '\n') {
        ++pos;
        break;
      }
      break;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  if (quoted) {
    throw InputError(origin + ": unterminated quote in record starting at line " +
                     std::to_string(line_no));
  }
  fields.push_back(std::move(field));
  return pos;
}

}  // namespace

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table read_stream(std::istream& in, const std::string& origin) {
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  Table table;
  if (text.empty()) {
    throw InputError(origin + ": empty file (a header row is required)");
  }
  std::size_t pos = 0;
  int line_no = 1;
  pos = parse_record(text, pos, table.header, origin, line_no);
  if (table.header.size() == 1 && table.header[0].empty()) {
    throw InputError(origin + ": empty header row");
  }
  std::vector<std::string> fields;
  while (pos < text.size()) {
    ++line_no;
    pos = parse_record(text, pos, fields, origin, line_no);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != table.header.size()) {
      throw InputError(origin + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(fields);
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open input file: " + path);
  }
  return read_stream(in, path);
}

std::string escape_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_stream(std::ostream& out, const Table& table) {
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.put(',');
      out << escape_field(row[i]);
    }
    out.put('\n');
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

}  // namespace tsd::csv
