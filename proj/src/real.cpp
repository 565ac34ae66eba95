#include "rigidity/real.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rigidity {

namespace {
int g_bits = 256;

unsigned digits_for_bits(int bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}
[[maybe_unused]] const bool g_initialized = [] {
  Real::default_precision(digits_for_bits(g_bits));
  return true;
}();
}  // namespace

int precision_bits() { return g_bits; }

void set_precision_bits(int bits) {
  if (bits < 53) throw std::invalid_argument("precision below 53 bits");
  g_bits = bits;
  Real::default_precision(digits_for_bits(bits));
}

PrecisionScope::PrecisionScope(int bits) : saved_(g_bits) { set_precision_bits(bits); }

PrecisionScope::~PrecisionScope() { set_precision_bits(saved_); }

Real epsilon() { return ldexp(Real(1), -g_bits); }

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), GMP_RNDN);
  return r;
}

Real parse_real(const std::string& text) {
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: " + text);
  }
}

std::string to_string(const Real& x, int digits) {
  int d = digits > 0 ? digits : static_cast<int>(digits_for_bits(g_bits)) - 1;
  std::ostringstream os;
  os << std::scientific << std::setprecision(d - 1) << x;
  return os.str();
}

Real wrap(const Real& x, const Real& period) {
  Real r = fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

Real wrap_centered(const Real& x, const Real& period) {
  Real half = period / 2;
  Real r = wrap(x + half, period) - half;
  return r;
}

}  // namespace rigidity
