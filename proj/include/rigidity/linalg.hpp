#pragma once

#include "rigidity/real.hpp"

#include <vector>

namespace rigidity {

struct Vec2 {
  Real x, y;
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(const Real& s, const Vec2& a) { return {s * a.x, s * a.y}; }
inline Real dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Real cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Real norm(const Vec2& a) { return sqrt(dot(a, a)); }

// [[a, b], [c, d]]
struct Mat2 {
  Real a, b, c, d;

  static Mat2 identity() { return {Real(1), Real(0), Real(0), Real(1)}; }
  Real det() const { return a * d - b * c; }
  Real trace() const { return a + d; }
  Mat2 inverse() const;
  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

Mat2 operator*(const Mat2& m, const Mat2& n);

struct SaddleEigen {
  Real stable;    // |stable| < 1
  Real unstable;  // |unstable| > 1
  Vec2 stable_dir;
  Vec2 unstable_dir;
};

// Real eigen-decomposition of a hyperbolic 2x2 matrix; throws if |trace| is not above 2|det|^(1/2).
SaddleEigen saddle_eigen(const Mat2& m);

using Matrix = std::vector<std::vector<Real>>;

Matrix zeros(std::size_t rows, std::size_t cols);

// Gaussian elimination with partial pivoting.
std::vector<Real> solve(Matrix a, std::vector<Real> b);

// Solves a cyclic tridiagonal system: lower[i] multiplies x[i-1], upper[i] multiplies x[i+1]
// (indices mod n). With cyclic = false the corner terms are ignored.
std::vector<Real> solve_tridiagonal(const std::vector<Real>& lower, const std::vector<Real>& diag,
                                    const std::vector<Real>& upper, const std::vector<Real>& rhs,
                                    bool cyclic);

struct LeastSquaresFit {
  std::vector<Real> coef;
  std::vector<Real> residuals;      // unweighted y - X coef
  std::vector<Real> cov_diagonal;   // diag((X^T W X)^-1)
  Real weighted_rss;
};

// Weighted least squares by Householder QR on column-scaled design.
LeastSquaresFit least_squares(const Matrix& x, const std::vector<Real>& y,
                              const std::vector<Real>& weights = {});

}  // namespace rigidity
