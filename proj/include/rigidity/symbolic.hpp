#pragma once

#include <string>
#include <vector>

namespace rigidity {

// Word over obstacle labels 1..m.
struct SymbolicWord {
  std::vector<int> symbols;
  bool cyclic = true;

  static SymbolicWord parse(const std::string& digits, bool cyclic = true);
  std::string str() const;
  int size() const { return static_cast<int>(symbols.size()); }
  bool operator==(const SymbolicWord& o) const = default;
};

bool is_admissible(const SymbolicWord& word, int m);
// Throws a validation error naming the first bad adjacency.
void require_admissible(const SymbolicWord& word, int m);

// w_O repeated n+1 times followed by w_c, cyclic.
SymbolicWord horseshoe_word(const SymbolicWord& block, const SymbolicWord& connector, int n);

SymbolicWord rotated(const SymbolicWord& word, int shift);
SymbolicWord reversed(const SymbolicWord& word);
SymbolicWord repeated(const SymbolicWord& word, int times);

}  // namespace rigidity
