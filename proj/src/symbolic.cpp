#include "rigidity/symbolic.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cctype>

namespace rigidity {

SymbolicWord SymbolicWord::parse(const std::string& digits, bool cyclic) {
  SymbolicWord w;
  w.cyclic = cyclic;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
      fail(ErrorKind::validation, "word '" + digits + "' must consist of digits 1-9");
    w.symbols.push_back(c - '0');
  }
  return w;
}

std::string SymbolicWord::str() const {
  std::string s;
  for (int v : symbols) s += static_cast<char>('0' + v);
  return s;
}

namespace {
int first_violation(const SymbolicWord& w) {
  const int n = w.size();
  for (int i = 0; i + 1 < n; ++i)
    if (w.symbols[i] == w.symbols[i + 1]) return i;
  if (w.cyclic && n >= 1 && w.symbols[n - 1] == w.symbols[0]) return n - 1;
  return -1;
}
}  // namespace

bool is_admissible(const SymbolicWord& word, int m) {
  for (int v : word.symbols)
    if (v < 1 || v > m) return false;
  return first_violation(word) < 0;
}

void require_admissible(const SymbolicWord& word, int m) {
  for (int v : word.symbols)
    if (v < 1 || v > m)
      fail(ErrorKind::validation, "symbol " + std::to_string(v) + " outside alphabet 1.." +
                                      std::to_string(m) + " in word " + word.str());
  int bad = first_violation(word);
  if (bad >= 0)
    fail(ErrorKind::validation, "word " + word.str() + " repeats symbol at junction " +
                                    std::to_string(bad) + "-" +
                                    std::to_string((bad + 1) % word.size()));
}

SymbolicWord horseshoe_word(const SymbolicWord& block, const SymbolicWord& connector, int n) {
  require(n >= 0, "horseshoe index must be nonnegative");
  require(block.size() > 0 && connector.size() > 0, "block and connector must be nonempty");
  SymbolicWord w;
  w.cyclic = true;
  for (int k = 0; k <= n; ++k) w.symbols.insert(w.symbols.end(), block.symbols.begin(), block.symbols.end());
  w.symbols.insert(w.symbols.end(), connector.symbols.begin(), connector.symbols.end());
  int bad = first_violation(w);
  if (bad >= 0)
    fail(ErrorKind::validation, "inadmissible junction at index " + std::to_string(bad) +
                                    " in " + w.str());
  return w;
}

SymbolicWord rotated(const SymbolicWord& word, int shift) {
  SymbolicWord w = word;
  const int n = w.size();
  if (n == 0) return w;
  shift = ((shift % n) + n) % n;
  std::rotate(w.symbols.begin(), w.symbols.begin() + shift, w.symbols.end());
  return w;
}

SymbolicWord reversed(const SymbolicWord& word) {
  SymbolicWord w = word;
  std::reverse(w.symbols.begin(), w.symbols.end());
  return w;
}

SymbolicWord repeated(const SymbolicWord& word, int times) {
  SymbolicWord w;
  w.cyclic = word.cyclic;
  for (int k = 0; k < times; ++k) w.symbols.insert(w.symbols.end(), word.symbols.begin(), word.symbols.end());
  return w;
}

}  // namespace rigidity
