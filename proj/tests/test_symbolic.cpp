#include <doctest.h>

#include "rigidity/errors.hpp"
#include "rigidity/symbolic.hpp"

#include <random>

using namespace rigidity;

TEST_CASE("admissibility") {
  CHECK_FALSE(is_admissible(SymbolicWord::parse("121"), 3));
  CHECK(is_admissible(SymbolicWord::parse("121", false), 3));
  CHECK(is_admissible(SymbolicWord::parse("12"), 3));
  CHECK(is_admissible(SymbolicWord::parse("1213"), 3));
  CHECK_FALSE(is_admissible(SymbolicWord::parse("11"), 3));
  CHECK_FALSE(is_admissible(SymbolicWord::parse("14"), 3));
}

TEST_CASE("horseshoe words") {
  auto b = SymbolicWord::parse("12"), c = SymbolicWord::parse("13");
  CHECK(horseshoe_word(b, c, 0).str() == "1213");
  CHECK(horseshoe_word(b, c, 2).str() == "12121213");
  CHECK_THROWS_AS(horseshoe_word(b, SymbolicWord::parse("21"), 0), Error);
}

TEST_CASE("random admissible blocks give admissible horseshoe words of the right length") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> len(1, 5), sym(1, 4);
  int tested = 0;
  while (tested < 200) {
    auto make = [&]() {
      SymbolicWord w;
      w.cyclic = false;
      int n = len(rng);
      while (w.size() < n) {
        int s = sym(rng);
        if (!w.symbols.empty() && w.symbols.back() == s) continue;
        w.symbols.push_back(s);
      }
      return w;
    };
    SymbolicWord b = make(), c = make();
    // Precondition: the cyclic word b b c is admissible.
    SymbolicWord probe = b;
    probe.symbols.insert(probe.symbols.end(), b.symbols.begin(), b.symbols.end());
    probe.symbols.insert(probe.symbols.end(), c.symbols.begin(), c.symbols.end());
    probe.cyclic = true;
    if (!is_admissible(probe, 4)) continue;
    for (int n : {0, 1, 4}) {
      SymbolicWord h = horseshoe_word(b, c, n);
      CHECK(is_admissible(h, 4));
      CHECK(h.size() == (n + 1) * b.size() + c.size());
    }
    ++tested;
  }
}

TEST_CASE("rotation, reversal, repetition") {
  auto w = SymbolicWord::parse("1213");
  CHECK(rotated(w, 1).str() == "2131");
  CHECK(rotated(w, -1).str() == "3121");
  CHECK(reversed(w).str() == "3121");
  CHECK(repeated(SymbolicWord::parse("12"), 2).str() == "1212");
}
