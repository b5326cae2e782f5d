#pragma once

// Minimal delimited-text reader/writer (RFC 4180 quoting).

#include <string>
#include <string_view>
#include <vector>

namespace chaid {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// First record is the header. Throws on ragged rows or unterminated quotes.
// An input with no bytes yields an empty header.
CsvTable parse_csv(std::string_view text, char delimiter = ',');
CsvTable read_csv_file(const std::string& path, char delimiter = ',');

std::string format_csv_row(const std::vector<std::string>& fields,
                           char delimiter = ',');

}  // namespace chaid
