#include "hvaclab/config_file.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hvaclab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return true;
  }
  return false;
}

std::string ConfigSection::get(const std::string& key, const std::string& fallback) const {
  std::string out = fallback;
  for (const auto& [k, v] : entries) {
    if (k == key) out = v;
  }
  return out;
}

std::vector<ConfigSection> parse_config_text(const std::string& text,
                                             const std::string& origin) {
  std::vector<ConfigSection> sections;
  sections.push_back({"", {}});  // implicit top section
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    sections.back().entries.emplace_back(std::move(key), std::move(value));
  }
  if (sections.front().entries.empty()) sections.erase(sections.begin());
  return sections;
}

std::vector<ConfigSection> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

double config_double(const ConfigSection& s, const std::string& key, double fallback) {
  if (!s.has(key)) return fallback;
  const std::string v = s.get(key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("bad number for '" + key + "': " + v);
  }
  return x;
}

long long config_int(const ConfigSection& s, const std::string& key, long long fallback) {
  if (!s.has(key)) return fallback;
  const std::string v = s.get(key);
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("bad integer for '" + key + "': " + v);
  }
  return x;
}

bool config_bool(const ConfigSection& s, const std::string& key, bool fallback) {
  if (!s.has(key)) return fallback;
  const std::string v = s.get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

std::vector<double> config_doubles(const ConfigSection& s, const std::string& key) {
  std::vector<double> out;
  if (!s.has(key)) return out;
  std::string v = s.get(key);
  for (char& c : v) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(v);
  double x = 0.0;
  while (in >> x) out.push_back(x);
  if (!in.eof()) throw ConfigError("bad number list for '" + key + "': " + s.get(key));
  return out;
}

}  // namespace hvaclab
