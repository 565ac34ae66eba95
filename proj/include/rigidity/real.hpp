#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace rigidity {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Working precision is process-wide: set it once before spawning workers.
int precision_bits();
void set_precision_bits(int bits);

class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

// 2^-bits relative to 1.
Real epsilon();
Real pi();

Real parse_real(const std::string& text);

// Scientific notation, `digits` significant digits (0 = full working precision).
std::string to_string(const Real& x, int digits = 0);

inline double to_double(const Real& x) { return x.convert_to<double>(); }

inline Real sqr(const Real& x) { return x * x; }

// Reduce x into [0, period).
Real wrap(const Real& x, const Real& period);
// Reduce x into [-period/2, period/2).
Real wrap_centered(const Real& x, const Real& period);

}  // namespace rigidity
