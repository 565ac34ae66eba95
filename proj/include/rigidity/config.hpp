#pragma once

#include "rigidity/real.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rigidity {

// Line-oriented "key = value" text with [section] headers; sections and keys may repeat.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;  // empty for the preamble before the first header
  int line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
  std::vector<const ConfigEntry*> find_all(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigSection> sections;

  std::vector<const ConfigSection*> named(const std::string& name) const;
  const ConfigSection* first(const std::string& name) const;
};

ConfigFile parse_config_text(const std::string& text, const std::string& path = "<text>");
ConfigFile load_config(const std::string& path);

// Arithmetic on reals: + - * / ^, parentheses, pi, sqrt, sin, cos, tan, exp, log.
Real eval_expression(const std::string& text);
std::vector<Real> eval_list(const std::string& text, char sep = ',');
std::vector<std::string> split_list(const std::string& text, char sep = ',');
std::string trim(const std::string& s);

}  // namespace rigidity
