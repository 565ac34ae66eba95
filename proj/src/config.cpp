#include "rigidity/config.hpp"

#include "rigidity/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace rigidity {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  const ConfigEntry* hit = nullptr;
  for (const auto& e : entries)
    if (e.key == key) hit = &e;
  return hit;
}

std::vector<const ConfigEntry*> ConfigSection::find_all(const std::string& key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

std::string ConfigSection::get(const std::string& key, const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

std::string ConfigSection::require(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e)
    fail(ErrorKind::validation, "missing key '" + key + "' in section [" + name + "] (line " +
                                    std::to_string(line) + ")");
  return e->value;
}

std::vector<const ConfigSection*> ConfigFile::named(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

const ConfigSection* ConfigFile::first(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

ConfigFile parse_config_text(const std::string& text, const std::string& path) {
  ConfigFile cfg;
  cfg.path = path;
  cfg.sections.push_back(ConfigSection{"", 0, {}});
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(ErrorKind::validation, path + ":" + std::to_string(line) + ": bad section header");
      cfg.sections.push_back(ConfigSection{trim(s.substr(1, s.size() - 2)), line, {}});
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::validation, path + ":" + std::to_string(line) + ": expected key = value");
    cfg.sections.back().entries.push_back({trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line});
  }
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::validation, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string& t) : t_(t) {}

  Real parse() {
    Real v = sum();
    skip();
    if (p_ != t_.size()) error("unexpected trailing input");
    return v;
  }

 private:
  const std::string& t_;
  std::size_t p_ = 0;

  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::validation, "expression '" + t_ + "': " + what);
  }
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(char c) {
    skip();
    if (p_ < t_.size() && t_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  Real sum() {
    Real v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  Real product() {
    Real v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  Real unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Real power() {
    Real base = atom();
    if (eat('^')) return pow(base, unary());
    return base;
  }
  Real atom() {
    skip();
    if (eat('(')) {
      Real v = sum();
      if (!eat(')')) error("missing ')'");
      return v;
    }
    if (p_ < t_.size() && (std::isdigit(static_cast<unsigned char>(t_[p_])) || t_[p_] == '.')) {
      std::size_t b = p_;
      while (p_ < t_.size() && (std::isdigit(static_cast<unsigned char>(t_[p_])) || t_[p_] == '.')) ++p_;
      if (p_ < t_.size() && (t_[p_] == 'e' || t_[p_] == 'E')) {
        std::size_t save = p_++;
        if (p_ < t_.size() && (t_[p_] == '+' || t_[p_] == '-')) ++p_;
        if (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) {
          while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
        } else {
          p_ = save;
        }
      }
      return parse_real(t_.substr(b, p_ - b));
    }
    if (p_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[p_]))) {
      std::size_t b = p_;
      while (p_ < t_.size() && std::isalnum(static_cast<unsigned char>(t_[p_]))) ++p_;
      std::string name = t_.substr(b, p_ - b);
      if (name == "pi") return rigidity::pi();
      if (!eat('(')) error("expected '(' after " + name);
      Real arg = sum();
      if (!eat(')')) error("missing ')'");
      if (name == "sqrt") return sqrt(arg);
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "tan") return tan(arg);
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      error("unknown function " + name);
    }
    error("unexpected character");
  }
};

}  // namespace

Real eval_expression(const std::string& text) { return ExprParser(text).parse(); }

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<Real> eval_list(const std::string& text, char sep) {
  std::vector<Real> out;
  for (const auto& s : split_list(text, sep)) out.push_back(eval_expression(s));
  return out;
}

}  // namespace rigidity
