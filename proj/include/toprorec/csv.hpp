#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace toprorec::csv {

using Row = std::vector<std::string>;

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
// A trailing newline does not produce an empty row. Throws ParseError on an
// unterminated quote.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace toprorec::csv
