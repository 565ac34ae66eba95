#include "rigidity/series.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>

namespace rigidity {

Series Series::variable(int order, const Real& base) {
  Series s(order, base);
  if (order >= 1) s[1] = 1;
  return s;
}

Series& Series::operator+=(const Series& o) {
  for (int k = 0; k <= std::min(order(), o.order()); ++k) c_[k] += o.c_[k];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  for (int k = 0; k <= std::min(order(), o.order()); ++k) c_[k] -= o.c_[k];
  return *this;
}

Series& Series::operator*=(const Real& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Series Series::derivative() const {
  Series r(order());
  for (int k = 1; k <= order(); ++k) r[k - 1] = c_[k] * k;
  return r;
}

Series Series::integral() const {
  Series r(order());
  for (int k = 1; k <= order(); ++k) r[k] = c_[k - 1] / k;
  return r;
}

Real Series::evaluate(const Real& u) const {
  Real s = c_.back();
  for (int k = order() - 1; k >= 0; --k) s = s * u + c_[k];
  return s;
}

Series operator+(Series a, const Series& b) { return a += b; }
Series operator-(Series a, const Series& b) { return a -= b; }
Series operator*(Series a, const Real& s) { return a *= s; }
Series operator*(const Real& s, Series a) { return a *= s; }

Series operator*(const Series& a, const Series& b) {
  int n = std::min(a.order(), b.order());
  Series r(n);
  for (int i = 0; i <= n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series reciprocal(const Series& a) {
  if (a[0] == 0) fail(ErrorKind::internal, "reciprocal of series with zero constant");
  int n = a.order();
  Series r(n);
  r[0] = 1 / a[0];
  for (int k = 1; k <= n; ++k) {
    Real s = 0;
    for (int j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s * r[0];
  }
  return r;
}

Series sqrt(const Series& a) {
  if (a[0] <= 0) fail(ErrorKind::internal, "sqrt of series with nonpositive constant");
  int n = a.order();
  Series r(n);
  r[0] = sqrt(a[0]);
  for (int k = 1; k <= n; ++k) {
    Real s = a[k];
    for (int j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (2 * r[0]);
  }
  return r;
}

Series compose(const Series& a, const Series& b) {
  if (b[0] != 0) fail(ErrorKind::internal, "series composition needs zero inner constant");
  int n = std::min(a.order(), b.order());
  Series r(n, a[n]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * b;
    r[0] += a[k];
  }
  return r;
}

Series reversion(const Series& a) {
  if (a[0] != 0 || a[1] == 0) fail(ErrorKind::internal, "series reversion needs a[0]=0, a[1]!=0");
  int n = a.order();
  // Fixed point r = (u - N(r)) / a1, gaining one order per pass.
  Series r(n);
  if (n >= 1) r[1] = 1 / a[1];
  Series nonlinear = a;
  nonlinear[1] = 0;
  for (int pass = 2; pass <= n; ++pass) {
    Series t = compose(nonlinear, r);
    Series next(n);
    next[1] = 1 / a[1];
    for (int k = 2; k <= n; ++k) next[k] = -t[k] / a[1];
    r = next;
  }
  return r;
}

Series sin_series(const Real& x0, int order) {
  Series s(order);
  Real sv = sin(x0), cv = cos(x0);
  Real fact = 1;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    const Real& d = (k % 4 == 0) ? sv : (k % 4 == 1) ? cv : (k % 4 == 2) ? -sv : -cv;
    s[k] = d / fact;
  }
  return s;
}

Series cos_series(const Real& x0, int order) {
  Series s(order);
  Real sv = sin(x0), cv = cos(x0);
  Real fact = 1;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    const Real& d = (k % 4 == 0) ? cv : (k % 4 == 1) ? -sv : (k % 4 == 2) ? -cv : sv;
    s[k] = d / fact;
  }
  return s;
}

}  // namespace rigidity
