#pragma once

#include "rigidity/real.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rigidity {

using Document = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Decimal string with at least 30 significant digits and never fewer than the working precision.
std::string real_string(const Real& x);
// Shortest round-trip form of a double.
std::string double_string(double x);

// key = value text: scalars first, then nested objects and arrays of objects as [sections].
std::string render_text(const Document& doc);

// CSV with a header line; cells are written verbatim.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace rigidity
