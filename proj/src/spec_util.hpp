#pragma once

// Internal helpers for the loss/prior specification grammars and the
// two-column CSV files they reference.

#include <string>
#include <utility>
#include <vector>

namespace bgibbs::detail {

std::vector<std::string> split(const std::string& s, char sep);

std::string trim(const std::string& s);

// Full-token double parse; throws ParseError on trailing garbage.
double parse_double(const std::string& tok, const std::string& what);

// key=value[,key=value...]; throws ParseError on malformed pairs.
std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& body);

// Reads a CSV with header "c1,c2" (case-insensitive, spaces tolerated) and
// numeric rows. Throws ParseError on I/O or format problems.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::string& path, const std::string& c1, const std::string& c2);

}  // namespace bgibbs::detail
