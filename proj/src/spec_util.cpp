#include "spec_util.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "bgibbs/errors.hpp"

namespace bgibbs::detail {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& tok, const std::string& what) {
  const std::string t = trim(tok);
  if (t.empty()) throw ParseError("empty " + what);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) {
    throw ParseError("bad " + what + ": '" + tok + "'");
  }
  return v;
}

std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& body) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& item : split(body, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value, got '" + item + "'");
    }
    out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return out;
}

namespace {
std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}
}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::string& path, const std::string& c1, const std::string& c2) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() != 2 || lower(trim(header[0])) != c1 ||
      lower(trim(header[1])) != c2) {
    throw ParseError("'" + path + "': expected header '" + c1 + "," + c2 +
                     "', got '" + line + "'");
  }
  std::vector<double> xs, ys;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2) {
      throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                       ": expected 2 columns");
    }
    xs.push_back(parse_double(cells[0], c1 + " value"));
    ys.push_back(parse_double(cells[1], c2 + " value"));
  }
  return {std::move(xs), std::move(ys)};
}

}  // namespace bgibbs::detail
