#include "rigidity/jet.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>

namespace rigidity {

Jet2::Jet2(int order) : order_(order), c_(size_for(order), Real(0)) {}

Jet2 Jet2::constant(int order, const Real& c) {
  Jet2 j(order);
  j.c_[0] = c;
  return j;
}

Jet2 Jet2::variable(int order, int which, const Real& base) {
  Jet2 j = constant(order, base);
  if (order >= 1) j.coeff(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = 1;
  return j;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  int n = std::min(size(), o.size());
  for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  int n = std::min(size(), o.size());
  for (int i = 0; i < n; ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet2& Jet2::operator*=(const Real& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Jet2 Jet2::derivative(int which) const {
  Jet2 r(order_);
  for (int d = 1; d <= order_; ++d)
    for (int a = 0; a <= d; ++a) {
      int b = d - a;
      if (which == 0 && a > 0) r.coeff(a - 1, b) = coeff(a, b) * a;
      if (which == 1 && b > 0) r.coeff(a, b - 1) = coeff(a, b) * b;
    }
  return r;
}

Real Jet2::evaluate(const Real& d1, const Real& d2) const {
  // Horner in d1 over polynomials in d2.
  Real total = 0;
  for (int a = order_; a >= 0; --a) {
    Real inner = 0;
    for (int b = order_ - a; b >= 0; --b) inner = inner * d2 + coeff(a, b);
    total = total * d1 + inner;
  }
  return total;
}

Jet2 Jet2::truncated(int order) const {
  Jet2 r(order);
  int n = std::min(size(), r.size());
  for (int i = 0; i < n; ++i) r.c_[i] = c_[i];
  return r;
}

Jet2 Jet2::degrees(int lo, int hi) const {
  Jet2 r(order_);
  for (int d = std::max(lo, 0); d <= std::min(hi, order_); ++d)
    for (int a = 0; a <= d; ++a) r.coeff(a, d - a) = coeff(a, d - a);
  return r;
}

Real Jet2::max_abs(int min_degree) const {
  Real m = 0;
  for (int i = Jet2::size_for(min_degree - 1); i < size(); ++i) m = std::max(m, abs(c_[i]));
  return m;
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
Jet2 operator*(Jet2 a, const Real& s) { return a *= s; }
Jet2 operator*(const Real& s, Jet2 a) { return a *= s; }
Jet2 operator+(Jet2 a, const Real& s) { return a += s; }
Jet2 operator-(Jet2 a, const Real& s) { return a -= s; }

Jet2 operator*(const Jet2& x, const Jet2& y) {
  const int k = std::min(x.order(), y.order());
  Jet2 r(k);
  Real tmp;
  for (int dx = 0; dx <= k; ++dx)
    for (int ax = 0; ax <= dx; ++ax) {
      const Real& cx = x.coeff(ax, dx - ax);
      if (cx == 0) continue;
      for (int dy = 0; dy + dx <= k; ++dy)
        for (int ay = 0; ay <= dy; ++ay) {
          const Real& cy = y.coeff(ay, dy - ay);
          if (cy == 0) continue;
          Real& out = r.coeff(ax + ay, dx - ax + dy - ay);
          mpfr_mul(tmp.backend().data(), cx.backend().data(), cy.backend().data(), MPFR_RNDN);
          mpfr_add(out.backend().data(), out.backend().data(), tmp.backend().data(), MPFR_RNDN);
        }
    }
  return r;
}

Jet2 apply_series(const Series& f, const Jet2& u) {
  Jet2 du = u;
  du.value() = 0;
  int n = std::min(f.order(), u.order());
  Jet2 r = Jet2::constant(u.order(), f[n]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * du;
    r.value() += f[k];
  }
  return r;
}

Jet2 evaluate_polynomial(const Jet2& poly, const Jet2& x, const Jet2& y) {
  const int kp = poly.order();
  const int k = x.order();
  Jet2 total(k);
  for (int a = kp; a >= 0; --a) {
    Jet2 inner(k);
    for (int b = kp - a; b >= 0; --b) {
      inner = inner * y;
      inner.value() += poly.coeff(a, b);
    }
    total = total * x;
    total += inner;
  }
  return total;
}

namespace {
Series power_series(const Real& w0, const Real& e, int order) {
  // Taylor coefficients of w^e at w0.
  Series s(order);
  Real base = pow(w0, e);
  Real binom = 1;
  for (int k = 0; k <= order; ++k) {
    s[k] = binom * base;
    binom = binom * (e - k) / (k + 1);
    base /= w0;
  }
  return s;
}
}  // namespace

Jet2 reciprocal(const Jet2& u) { return apply_series(power_series(u.value(), Real(-1), u.order()), u); }
Jet2 sqrt(const Jet2& u) {
  return apply_series(power_series(u.value(), Real(1) / 2, u.order()), u);
}
Jet2 pow(const Jet2& u, const Real& exponent) {
  return apply_series(power_series(u.value(), exponent, u.order()), u);
}

Mat2 JetMap::linear() const {
  return {x.coeff(1, 0), x.coeff(0, 1), y.coeff(1, 0), y.coeff(0, 1)};
}

Vec2 JetMap::evaluate(const Real& d1, const Real& d2) const {
  return {x.evaluate(d1, d2), y.evaluate(d1, d2)};
}

JetMap JetMap::truncated(int order) const { return {x.truncated(order), y.truncated(order)}; }
JetMap JetMap::degrees(int lo, int hi) const { return {x.degrees(lo, hi), y.degrees(lo, hi)}; }
Real JetMap::max_abs(int min_degree) const {
  return std::max(x.max_abs(min_degree), y.max_abs(min_degree));
}

JetMap JetMap::identity(int order) {
  return {Jet2::variable(order, 0), Jet2::variable(order, 1)};
}

JetMap JetMap::linear_map(int order, const Mat2& m) {
  JetMap r{Jet2(order), Jet2(order)};
  if (order >= 1) {
    r.x.coeff(1, 0) = m.a;
    r.x.coeff(0, 1) = m.b;
    r.y.coeff(1, 0) = m.c;
    r.y.coeff(0, 1) = m.d;
  }
  return r;
}

JetMap operator+(const JetMap& a, const JetMap& b) { return {a.x + b.x, a.y + b.y}; }
JetMap operator-(const JetMap& a, const JetMap& b) { return {a.x - b.x, a.y - b.y}; }

JetMap compose(const JetMap& outer, const JetMap& inner) {
  Jet2 dx = inner.x, dy = inner.y;
  dx.value() = 0;
  dy.value() = 0;
  return {evaluate_polynomial(outer.x, dx, dy), evaluate_polynomial(outer.y, dx, dy)};
}

JetMap inverse(const JetMap& f) {
  const int k = f.order();
  Mat2 linv = f.linear().inverse();
  JetMap nonlinear = f.degrees(2, k);
  JetMap g = JetMap::linear_map(k, linv);
  for (int pass = 2; pass <= k; ++pass) {
    JetMap n = compose(nonlinear, g);
    // g = L^-1 (id - N(g))
    Jet2 rx = Jet2::variable(k, 0) - n.x;
    Jet2 ry = Jet2::variable(k, 1) - n.y;
    g = {linv.a * rx + linv.b * ry, linv.c * rx + linv.d * ry};
  }
  return g;
}

JetMap shift(const JetMap& f, const Real& d1, const Real& d2) {
  const int k = f.order();
  Jet2 x = Jet2::variable(k, 0, d1), y = Jet2::variable(k, 1, d2);
  return {evaluate_polynomial(f.x, x, y), evaluate_polynomial(f.y, x, y)};
}

}  // namespace rigidity
