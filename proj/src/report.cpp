#include "rigidity/report.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rigidity {

std::string real_string(const Real& x) {
  int full = static_cast<int>(std::floor(precision_bits() * 0.30103));
  return to_string(x, std::max(30, full));
}

std::string double_string(double x) {
  char buf[40];
  for (int p = 15; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

namespace {

std::string scalar(const Document& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return double_string(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

bool is_section(const Document& v) {
  if (v.is_object()) return true;
  return v.is_array() && !v.empty() && v.front().is_object();
}

void render(const Document& doc, const std::string& prefix, std::ostringstream& os) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const Document& v = it.value();
    if (is_section(v)) continue;
    os << it.key() << " = ";
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
    } else {
      os << scalar(v);
    }
    os << "\n";
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const Document& v = it.value();
    if (!is_section(v)) continue;
    std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (v.is_object()) {
      os << "\n[" << name << "]\n";
      render(v, name, os);
    } else {
      for (const auto& item : v) {
        os << "\n[" << name << "]\n";
        render(item, name, os);
      }
    }
  }
}

}  // namespace

std::string render_text(const Document& doc) {
  std::ostringstream os;
  render(doc, "", os);
  return os.str();
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::validation, "cannot write " + path);
  f << content;
}

}  // namespace rigidity
