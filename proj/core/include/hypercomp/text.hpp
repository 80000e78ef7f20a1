#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string utilities shared by the file readers and writers.
namespace hypercomp::text {

std::string to_lower(std::string_view s);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

std::string replace_all(std::string_view s, char from, char to);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace hypercomp::text
