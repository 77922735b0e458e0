#pragma once

// Internal text/CSV helpers shared across the library sources.

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "ldsim/errors.hpp"

namespace ldsim::detail {

/// Writes via a sibling temp file and renames into place, so readers never
/// observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& text);

/// Decimal with 12 significant digits (%.12g).
std::string fmt12(double v);

/// Splits on commas and trims surrounding spaces; no quoting support, per
/// the documented CSV contracts.
std::vector<std::string> split_csv(const std::string& line);

/// Splits on runs of spaces/tabs, dropping empties.
std::vector<std::string> split_ws(const std::string& line);

std::string trim(const std::string& s);

std::int64_t parse_int(const std::string& tok, const std::string& file, std::size_t line,
                       const char* what);
double parse_double(const std::string& tok, const std::string& file, std::size_t line,
                    const char* what);

/// Reads a whole text file, normalising CRLF line ends.
std::vector<std::string> read_lines(const std::string& path);

} // namespace ldsim::detail
