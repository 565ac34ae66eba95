#include "rigidity/linalg.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rigidity {

Mat2 Mat2::inverse() const {
  Real det_ = det();
  if (det_ == 0) fail(ErrorKind::internal, "singular 2x2 matrix");
  return {d / det_, -b / det_, -c / det_, a / det_};
}

Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
          m.c * n.b + m.d * n.d};
}

namespace {
Vec2 eigenvector(const Mat2& m, const Real& mu) {
  // (m - mu) v = 0; pick the better-conditioned row.
  Vec2 r1{m.b, mu - m.a};
  Vec2 r2{mu - m.d, m.c};
  Vec2 v = norm(r1) >= norm(r2) ? r1 : r2;
  Real n = norm(v);
  return {v.x / n, v.y / n};
}
}  // namespace

SaddleEigen saddle_eigen(const Mat2& m) {
  Real t = m.trace();
  Real dt = m.det();
  Real disc = t * t - 4 * dt;
  if (disc <= 0 || abs(t) <= 2 * sqrt(abs(dt)))
    fail(ErrorKind::internal, "matrix is not hyperbolic (trace " + to_string(t, 12) + ")");
  Real root = sqrt(disc);
  // Avoid cancellation: the larger root first.
  Real big = t >= 0 ? (t + root) / 2 : (t - root) / 2;
  Real small = dt / big;
  SaddleEigen e{small, big, eigenvector(m, small), eigenvector(m, big)};
  return e;
}

Matrix zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<Real>(cols, Real(0)));
}

std::vector<Real> solve(Matrix a, std::vector<Real> b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0) fail(ErrorKind::internal, "singular linear system");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      Real f = a[i][k] / a[k][k];
      if (f == 0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

namespace {
std::vector<Real> thomas(std::vector<Real> lower, std::vector<Real> diag, std::vector<Real> upper,
                         std::vector<Real> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0) fail(ErrorKind::internal, "zero pivot in tridiagonal solve");
    Real f = lower[i] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  std::vector<Real> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}
}  // namespace

std::vector<Real> solve_tridiagonal(const std::vector<Real>& lower, const std::vector<Real>& diag,
                                    const std::vector<Real>& upper, const std::vector<Real>& rhs,
                                    bool cyclic) {
  const std::size_t n = diag.size();
  if (!cyclic || n < 3) {
    if (cyclic && n == 2) {
      // Both off-diagonal couplings land on the same entry.
      Matrix a = zeros(2, 2);
      a[0][0] = diag[0];
      a[1][1] = diag[1];
      a[0][1] = lower[0] + upper[0];
      a[1][0] = lower[1] + upper[1];
      return solve(a, rhs);
    }
    return thomas(lower, diag, upper, rhs);
  }
  // Sherman-Morrison on the corner entries.
  Real alpha = upper[n - 1];  // A[n-1][0]
  Real beta = lower[0];       // A[0][n-1]
  Real g = -diag[0];
  std::vector<Real> d = diag;
  d[0] -= g;
  d[n - 1] -= alpha * beta / g;
  std::vector<Real> x = thomas(lower, d, upper, rhs);
  std::vector<Real> u(n, Real(0));
  u[0] = g;
  u[n - 1] = alpha;
  std::vector<Real> z = thomas(lower, d, upper, u);
  Real fact = (x[0] + beta * x[n - 1] / g) / (1 + z[0] + beta * z[n - 1] / g);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

LeastSquaresFit least_squares(const Matrix& x, const std::vector<Real>& y,
                              const std::vector<Real>& weights) {
  const std::size_t m = x.size();
  if (m == 0) fail(ErrorKind::validation, "least squares with no rows");
  const std::size_t n = x[0].size();
  if (m < n) fail(ErrorKind::validation, "least squares underdetermined");
  std::vector<Real> sw(m, Real(1));
  if (!weights.empty())
    for (std::size_t i = 0; i < m; ++i) sw[i] = sqrt(weights[i]);
  Matrix a = zeros(m, n);
  std::vector<Real> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = sw[i] * x[i][j];
    b[i] = sw[i] * y[i];
  }
  std::vector<Real> scale(n, Real(1));
  for (std::size_t j = 0; j < n; ++j) {
    Real s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a[i][j] * a[i][j];
    s = sqrt(s);
    if (s == 0) fail(ErrorKind::degenerate, "least squares column is identically zero");
    scale[j] = s;
    for (std::size_t i = 0; i < m; ++i) a[i][j] /= s;
  }
  // Householder QR.
  for (std::size_t k = 0; k < n; ++k) {
    Real norm_x = 0;
    for (std::size_t i = k; i < m; ++i) norm_x += a[i][k] * a[i][k];
    norm_x = sqrt(norm_x);
    if (norm_x == 0) fail(ErrorKind::degenerate, "rank-deficient least squares design");
    Real alpha = a[k][k] > 0 ? -norm_x : norm_x;
    std::vector<Real> v(m, Real(0));
    for (std::size_t i = k; i < m; ++i) v[i] = a[i][k];
    v[k] -= alpha;
    Real vnorm2 = 0;
    for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0) continue;
    for (std::size_t j = k; j < n; ++j) {
      Real s = 0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * a[i][j];
      s = 2 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) a[i][j] -= s * v[i];
    }
    Real s = 0;
    for (std::size_t i = k; i < m; ++i) s += v[i] * b[i];
    s = 2 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) b[i] -= s * v[i];
  }
  std::vector<Real> c(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * c[j];
    c[i] = s / a[i][i];
  }
  // R^-1 for the covariance diagonal.
  Matrix rinv = zeros(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    rinv[j][j] = 1 / a[j][j];
    for (std::size_t i = j; i-- > 0;) {
      Real s = 0;
      for (std::size_t k = i + 1; k <= j; ++k) s += a[i][k] * rinv[k][j];
      rinv[i][j] = -s / a[i][i];
    }
  }
  LeastSquaresFit fit;
  fit.coef.resize(n);
  fit.cov_diagonal.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    fit.coef[j] = c[j] / scale[j];
    Real s = 0;
    for (std::size_t k = j; k < n; ++k) s += rinv[j][k] * rinv[j][k];
    fit.cov_diagonal[j] = s / (scale[j] * scale[j]);
  }
  fit.residuals.resize(m);
  fit.weighted_rss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Real p = 0;
    for (std::size_t j = 0; j < n; ++j) p += x[i][j] * fit.coef[j];
    fit.residuals[i] = y[i] - p;
    Real w = weights.empty() ? Real(1) : weights[i];
    fit.weighted_rss += w * fit.residuals[i] * fit.residuals[i];
  }
  return fit;
}

}  // namespace rigidity
