#pragma once

#include "rigidity/geometry.hpp"
#include "rigidity/jet.hpp"
#include "rigidity/linalg.hpp"

namespace rigidity {

// Collision coordinates: obstacle index, arclength s, angle phi between the outgoing velocity
// and the outward normal n = (T_y, -T_x), positive towards the tangent T.
struct PhasePoint {
  int obstacle = 0;
  Real s;
  Real phi;
};

struct StepOptions {
  double grazing_guard = 1e-3;
  int bracket_nodes = 64;
  int jet_ceiling = 8;
};

struct StepResult {
  PhasePoint next;
  Real flight;
};

// Position and unit outgoing velocity of a phase point.
Vec2 position(const BilliardTable& table, const PhasePoint& x);
Vec2 velocity(const BilliardTable& table, const PhasePoint& x);
// Phase point of an outgoing velocity at a boundary point.
Real outgoing_angle(const BilliardTable& table, int obstacle, const Real& s, const Vec2& v);

StepResult billiard_step(const BilliardTable& table, const PhasePoint& x,
                         const StepOptions& options = {});

// Step to a known target obstacle, refining from the guess `s_guess` (no global search).
StepResult billiard_step_to(const BilliardTable& table, const PhasePoint& x, int target,
                            const Real& s_guess, const StepOptions& options = {});

// Order-1 jet of one collision step.
Mat2 billiard_derivative(const BilliardTable& table, const PhasePoint& x,
                         const StepOptions& options = {});

// Taylor jet of one collision step in displacement variables (ds, dphi) around x. Output
// components are the absolute (s', phi') of the image; s' is not reduced mod perimeter.
struct CollisionJet {
  JetMap map;
  StepResult step;
  Jet2 flight;
};

CollisionJet jet_collision_step(const BilliardTable& table, const PhasePoint& x, int order,
                                const StepOptions& options = {});
// Same, with the image already known (target obstacle and arclength).
CollisionJet jet_collision_step_to(const BilliardTable& table, const PhasePoint& x, int order,
                                   int target, const Real& s_guess,
                                   const StepOptions& options = {});

}  // namespace rigidity
