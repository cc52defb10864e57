#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hvaclab/errors.hpp"

// Minimal INI-style reader shared by the catalog and experiment-spec files:
// "[section name]" headers, "key = value" lines, '#' comments, blank lines
// ignored. Keys keep file order; duplicate keys are kept (last one wins at
// lookup).

namespace hvaclab {

struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  // Last value for key, or fallback.
  std::string get(const std::string& key, const std::string& fallback = "") const;
};

std::vector<ConfigSection> parse_config_file(const std::string& path);
std::vector<ConfigSection> parse_config_text(const std::string& text,
                                             const std::string& origin = "<text>");

// Value helpers; throw ConfigError naming the key on bad input.
double config_double(const ConfigSection& s, const std::string& key, double fallback);
long long config_int(const ConfigSection& s, const std::string& key, long long fallback);
bool config_bool(const ConfigSection& s, const std::string& key, bool fallback);
// Whitespace- or comma-separated list of numbers.
std::vector<double> config_doubles(const ConfigSection& s, const std::string& key);

}  // namespace hvaclab
