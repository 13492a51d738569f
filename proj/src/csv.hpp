#pragma once

// Small CSV helpers shared by the readers. Not part of the public API.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windatlas::detail {

struct CsvLine {
  std::size_t number{};  // 1-based
  std::string_view text;
};

/// Splits text into lines (LF or CRLF), dropping blank lines and a UTF-8 BOM.
std::vector<CsvLine> split_lines(std::string_view text);

/// Splits one record on commas; double-quoted fields may contain commas and
/// doubled quotes. Surrounding whitespace is trimmed from unquoted fields.
std::vector<std::string> split_fields(std::string_view line);

/// Quotes a field when it contains a comma, quote, or newline.
std::string escape_field(std::string_view field);

std::string_view trim(std::string_view s);

/// Whole-string numeric parse; std::nullopt on anything else (including "").
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest representation that reads back to the same double.
std::string format_double(double value);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Reads `# key: value` comment lines; returns the value for `key` if present.
std::optional<std::string> comment_value(std::string_view line, std::string_view key);

/// Index of `name` in `header`, or std::nullopt.
std::optional<std::size_t> column_index(const std::vector<std::string>& header, std::string_view name);

}  // namespace windatlas::detail
