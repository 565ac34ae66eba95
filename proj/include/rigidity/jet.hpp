#pragma once

#include "rigidity/linalg.hpp"
#include "rigidity/real.hpp"
#include "rigidity/series.hpp"

#include <vector>

namespace rigidity {

// Truncated bivariate Taylor polynomial sum c_ab d1^a d2^b, a + b <= order.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int order);
  static Jet2 constant(int order, const Real& c);
  // base + d_which, which in {0, 1}.
  static Jet2 variable(int order, int which, const Real& base = Real(0));

  static int size_for(int order) { return (order + 1) * (order + 2) / 2; }
  static int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

  int order() const { return order_; }
  int size() const { return static_cast<int>(c_.size()); }
  Real& coeff(int a, int b) { return c_[index(a, b)]; }
  const Real& coeff(int a, int b) const { return c_[index(a, b)]; }
  Real& operator[](int i) { return c_[i]; }
  const Real& operator[](int i) const { return c_[i]; }
  const Real& value() const { return c_[0]; }
  Real& value() { return c_[0]; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Real& s);
  Jet2& operator+=(const Real& s) { c_[0] += s; return *this; }
  Jet2& operator-=(const Real& s) { c_[0] -= s; return *this; }
  Jet2 operator-() const;

  Jet2 derivative(int which) const;
  Real evaluate(const Real& d1, const Real& d2) const;
  Jet2 truncated(int order) const;
  // Only the terms of total degree in [lo, hi].
  Jet2 degrees(int lo, int hi) const;
  // Largest |c_ab| over a + b >= min_degree.
  Real max_abs(int min_degree = 0) const;

 private:
  int order_ = -1;
  std::vector<Real> c_;
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(Jet2 a, const Real& s);
Jet2 operator*(const Real& s, Jet2 a);
Jet2 operator+(Jet2 a, const Real& s);
Jet2 operator-(Jet2 a, const Real& s);

// sum_k f[k] (u - u0)^k with f the Taylor coefficients of a function at u0 = u.value().
Jet2 apply_series(const Series& f, const Jet2& u);
// poly evaluated at jets (x, y) with arbitrary constant terms; result has x's order.
Jet2 evaluate_polynomial(const Jet2& poly, const Jet2& x, const Jet2& y);

Jet2 reciprocal(const Jet2& u);
Jet2 sqrt(const Jet2& u);
Jet2 pow(const Jet2& u, const Real& exponent);

// A planar map in displacement variables; output components are absolute values.
struct JetMap {
  Jet2 x, y;

  int order() const { return x.order(); }
  Vec2 value() const { return {x.value(), y.value()}; }
  Mat2 linear() const;
  Vec2 evaluate(const Real& d1, const Real& d2) const;
  JetMap truncated(int order) const;
  JetMap degrees(int lo, int hi) const;
  Real max_abs(int min_degree = 0) const;

  static JetMap identity(int order);
  static JetMap linear_map(int order, const Mat2& m);
};

JetMap operator+(const JetMap& a, const JetMap& b);
JetMap operator-(const JetMap& a, const JetMap& b);

// outer expanded around inner's constant term: outer(inner - inner(0)).
JetMap compose(const JetMap& outer, const JetMap& inner);
// Inverse of (f - f(0)) as a displacement map with zero constant term.
JetMap inverse(const JetMap& f);
// Re-expansion of f around the displacement (d1, d2).
JetMap shift(const JetMap& f, const Real& d1, const Real& d2);

}  // namespace rigidity
