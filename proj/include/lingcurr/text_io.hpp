#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingcurr::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Strict decimal parse of the whole field (leading/trailing blanks allowed).
// Returns nullopt on anything that is not a number; "nan"/"inf" parse and are
// left for the caller to reject.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_integer(std::string_view field);

// RFC 4180 style: fields may be double-quoted, "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);
std::string quote_csv_field(std::string_view field);
std::string join_csv(const std::vector<std::string>& fields);

// Reads every line, stripping a trailing '\r'. Throws Error if unreadable.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes atomically enough for our purposes: whole content in one go.
void write_text(const std::filesystem::path& path, std::string_view content);

std::string trim(std::string_view s);

}  // namespace lingcurr::io
