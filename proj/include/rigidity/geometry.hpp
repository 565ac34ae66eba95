#pragma once

#include "rigidity/linalg.hpp"
#include "rigidity/real.hpp"
#include "rigidity/series.hpp"

#include <array>
#include <string>
#include <vector>

namespace rigidity {

enum class CurveKind { circle, ellipse, fourier_circle };

struct FourierMode {
  int k = 2;
  Real eps;
  Real phase;
};

struct CurveOptions {
  double curvature_margin = 1e-6;  // minimum of curvature * size on the validation grid
  int curvature_grid = 4096;
};

constexpr int kCurveOrderCeiling = 40;

// Strictly convex closed curve, counterclockwise, parametrized by arclength s in [0, perimeter).
// A natural angle parameter t in [0, 2pi) is used internally; s(0) = 0.
class ObstacleCurve {
 public:
  static ObstacleCurve circle(const Vec2& center, const Real& radius);
  static ObstacleCurve ellipse(const Vec2& center, const Real& a, const Real& b,
                               const Real& rotation);
  // r(t) = R (1 + sum eps_k cos(k t - phase_k))
  static ObstacleCurve fourier_circle(const Vec2& center, const Real& radius,
                                      std::vector<FourierMode> modes,
                                      const CurveOptions& options = {});

  CurveKind kind() const { return kind_; }
  const Real& perimeter() const { return perimeter_; }
  const Vec2& center() const { return center_; }
  // Every boundary point lies within this distance of center().
  double bounding_radius() const { return bounding_radius_; }
  std::string describe() const;

  // Position and derivatives d^j gamma / ds^j, j <= order.
  std::vector<Vec2> eval(const Real& s, int order) const;
  // Taylor coefficients in the arclength displacement u: gamma(s + u) = sum c_k u^k.
  std::array<Series, 2> taylor(const Real& s, int order) const;
  Real curvature(const Real& s) const;

  // Taylor coefficients in the natural-parameter displacement.
  std::array<Series, 2> param_taylor(const Real& t, int order) const;
  Vec2 point_at_param(const Real& t) const;
  Vec2 velocity_at_param(const Real& t) const;
  Real arclength_at_param(const Real& t) const;
  Real param_at_arclength(const Real& s) const;
  // Double-precision boundary samples at equally spaced natural parameters; the 64-node
  // set is precomputed.
  std::vector<std::array<double, 2>> samples(int count) const;
  double max_curvature_estimate() const { return max_curvature_; }

  // Parameters, for serialization.
  Real radius, semi_a, semi_b, rotation;
  std::vector<FourierMode> modes;

 private:
  ObstacleCurve() = default;
  void build_arclength();
  Real speed_at_param(const Real& t) const;

  CurveKind kind_ = CurveKind::circle;
  Vec2 center_;
  Real perimeter_;
  double bounding_radius_ = 0;
  double max_curvature_ = 0;
  std::vector<std::array<double, 2>> coarse_samples_;
  // speed(t) = c0 + sum over harmonics k = step*m of (ca cos kt + cb sin kt); the
  // antiderivative coefficients (ca/k, cb/k) are stored.
  Real c0_;
  int harmonic_step_ = 1;
  std::vector<Real> sa_, sb_;        // indexed by m, harmonic k = step*m
  std::vector<double> sad_, sbd_;
  double c0d_ = 0;
  double arclength_double(double t, double* speed) const;
};

struct TableOptions {
  int samples_per_obstacle = 512;
  double required_margin = 1e-6;
};

struct NonEclipseReport {
  bool pass = false;
  double margin = 0;  // min distance of a third obstacle to a pairwise hull (negative: overlap)
  std::array<int, 3> witness{{-1, -1, -1}};  // (i, j, k) attaining the margin
  std::string message;
};

struct ClearanceReport {
  bool pass = false;
  double clearance = 0;
  std::array<int, 2> witness{{-1, -1}};
};

class BilliardTable {
 public:
  // Validates disjointness and non-eclipse; throws a validation error otherwise.
  static BilliardTable create(std::vector<ObstacleCurve> obstacles, std::string name = "",
                              const TableOptions& options = {});
  // No validation; used to inspect invalid configurations.
  static BilliardTable unchecked(std::vector<ObstacleCurve> obstacles, std::string name = "");

  int size() const { return static_cast<int>(obstacles_.size()); }
  const ObstacleCurve& operator[](int i) const { return obstacles_[i]; }
  const std::vector<ObstacleCurve>& obstacles() const { return obstacles_; }
  const std::string& name() const { return name_; }
  Real total_perimeter() const;
  double non_eclipse_margin() const { return non_eclipse_margin_; }
  // Copy with every length multiplied by c about the origin.
  BilliardTable scaled(const Real& c) const;

 private:
  std::vector<ObstacleCurve> obstacles_;
  std::string name_;
  double non_eclipse_margin_ = 0;
};

ClearanceReport clearance_check(const BilliardTable& table, const TableOptions& options = {});
NonEclipseReport non_eclipse_check(const BilliardTable& table, const TableOptions& options = {});

ObstacleCurve parse_obstacle(const struct ConfigSection& section);
BilliardTable load_table(const std::string& path, const TableOptions& options = {});
BilliardTable parse_table(const std::string& text, const std::string& name = "",
                          const TableOptions& options = {});

}  // namespace rigidity
