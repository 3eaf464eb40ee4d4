#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qtr {

/// Shortest decimal text that parses back to exactly `value`; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double value);

/// Inverse of format_double (also accepts any strtod-style number).
double parse_double(std::string_view text);

/// Header plus rows of already formatted fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// RFC 4180 text with CRLF-free "\n" line endings; fields containing a
  /// comma, quote or newline are quoted with doubled inner quotes.
  std::string to_string() const;
};

/// Parses text produced by CsvTable::to_string (first line is the header).
CsvTable parse_csv(std::string_view text);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace qtr
