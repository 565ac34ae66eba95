#pragma once

#include "rigidity/real.hpp"

#include <vector>

namespace rigidity {

// Truncated univariate Taylor series sum_k c[k] u^k, k <= order.
class Series {
 public:
  Series() = default;
  explicit Series(int order) : c_(order + 1, Real(0)) {}
  Series(int order, const Real& constant) : c_(order + 1, Real(0)) { c_[0] = constant; }
  static Series variable(int order, const Real& base = Real(0));

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Real& operator[](int k) { return c_[k]; }
  const Real& operator[](int k) const { return c_[k]; }

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(const Real& s);
  Series operator-() const;

  Series derivative() const;
  // Antiderivative with zero constant, order preserved.
  Series integral() const;
  Real evaluate(const Real& u) const;

 private:
  std::vector<Real> c_;
};

Series operator+(Series a, const Series& b);
Series operator-(Series a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(Series a, const Real& s);
Series operator*(const Real& s, Series a);

Series reciprocal(const Series& a);
Series sqrt(const Series& a);
// a(b(u)) with b[0] = 0.
Series compose(const Series& a, const Series& b);
// Compositional inverse of a with a[0] = 0, a[1] != 0.
Series reversion(const Series& a);

// Taylor coefficients of sin/cos at x0 up to `order`.
Series sin_series(const Real& x0, int order);
Series cos_series(const Real& x0, int order);

}  // namespace rigidity
