#pragma once

#include "rigidity/billiard.hpp"
#include "rigidity/linalg.hpp"
#include "rigidity/symbolic.hpp"

#include <vector>

namespace rigidity {

struct OrbitOptions {
  double residual_target = 1e-40;  // on max |dL/ds_j|
  int max_newton = 80;
  int descent_sweeps = 40;
  double transversality_floor = 1e-4;
  StepOptions step;
};

struct PeriodicOrbit {
  SymbolicWord word;
  std::vector<PhasePoint> points;  // outgoing collision coordinates, obstacle index 0-based
  std::vector<Real> flights;       // flights[j]: from collision j to j+1
  Mat2 monodromy;
  Real lambda;       // contracting multiplier, sign kept (negative for reflection-hyperbolic words)
  Real le;           // -(1/p) log |lambda|
  Real flow_period;  // sum of flights
  Real stationarity; // max |dL/ds_j|
  Vec2 stable_dir, unstable_dir;  // eigendirections at points[0] in (s, phi)

  int period() const { return static_cast<int>(points.size()); }
};

PeriodicOrbit find_periodic_orbit(const BilliardTable& table, const SymbolicWord& word,
                                  const OrbitOptions& options = {});

// -log|lambda| / flow_period.
Real orbit_flow_exponent(const PeriodicOrbit& orbit);

struct HomoclinicSegment {
  PeriodicOrbit core;
  SymbolicWord block, connector;
  int depth = 0;
  std::vector<PhasePoint> points;  // collisions of block^m connector block^m
  std::vector<Real> flights;       // flights[j]: from collision j to j+1 (last one to the pin)
  int anchor1 = 0, anchor2 = 0;    // indices of x1, x2 in points
  Vec2 unstable_dir;               // unit, in (s, phi) at x1
  Vec2 stable_dir;                 // unit, in (s, phi) at x1
  Real transversality_angle;
  Real stationarity;

  const PhasePoint& x1() const { return points[anchor1]; }
  const PhasePoint& x2() const { return points[anchor2]; }
};

HomoclinicSegment find_homoclinic_segment(const BilliardTable& table, const SymbolicWord& block,
                                          const SymbolicWord& connector, int depth,
                                          const OrbitOptions& options = {});
// Reuses an already computed core orbit.
HomoclinicSegment find_homoclinic_segment(const BilliardTable& table, const PeriodicOrbit& core,
                                          const SymbolicWord& connector, int depth,
                                          const OrbitOptions& options = {});

// Derivative of one collision step between consecutive known collisions.
Mat2 step_derivative(const BilliardTable& table, const PhasePoint& from, const PhasePoint& to,
                     const StepOptions& options = {});

}  // namespace rigidity
