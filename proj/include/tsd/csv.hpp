#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsd::csv {

// In-memory CSV table. Cells are kept as raw strings; numeric parsing is the
// caller's concern. Reader accepts RFC-style quoted fields and CRLF endings,
// rejects ragged rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int n_rows() const { return static_cast<int>(rows.size()); }
  int n_cols() const { return static_cast<int>(header.size()); }

  /// Index of a header name, or -1.
  int column(const std::string& name) const;
};

Table read_file(const std::string& path);
Table read_stream(std::istream& in, const std::string& origin = "<stream>");

/// Quotes a field only when it contains a comma, quote, or newline.
std::string escape_field(const std::string& field);

void write_stream(std::ostream& out, const Table& table);

}  // namespace tsd::csv
