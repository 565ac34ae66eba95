#pragma once

#include "rigidity/jet.hpp"
#include "rigidity/orbits.hpp"
#include "rigidity/series.hpp"

#include <vector>

namespace rigidity {

struct NormalForm {
  Real lambda;
  std::vector<Real> a;   // a[0] = lambda, a[k] = k-th Birkhoff invariant
  JetMap conjugacy;      // R, displacement -> normal coordinates
  JetMap inverse;        // R^-1
  JetMap normalized;     // R o G o R^-1 as computed
  Real residual;         // max coefficient of R o G o R^-1 - N_Delta
  int order = 0;

  int invariants() const { return static_cast<int>(a.size()) - 1; }
  Series delta(int order) const;
};

// N_Delta(xi, eta) = (Delta(xi eta) xi, eta / Delta(xi eta)) as a jet at the origin.
JetMap normal_form_map(const std::vector<Real>& a, int order);
// N_Delta^power expanded at the point (xi0, eta0).
JetMap normal_form_power(const std::vector<Real>& a, int power, const Real& xi0, const Real& eta0,
                         int order);

// Jet of the return map around the orbit at collision `base`, in displacement variables.
JetMap return_map_jet(const BilliardTable& table, const PeriodicOrbit& orbit, int order,
                      int base = 0, const StepOptions& options = {});

// Birkhoff normal form of a displacement jet with hyperbolic linear part; needs order >= 2K+1.
NormalForm extract_birkhoff(const JetMap& g, int invariants);

// (ds, dphi) -> (ds, d sin phi) around the angle phi0; the billiard map preserves ds d(sin phi).
JetMap momentum_chart(const Real& phi0, int order);

// Normal form at collision `base` of the orbit. The conjugacy acts on (ds, dphi) displacements;
// the invariants are those of the return map in the area-preserving (s, sin phi) chart.
NormalForm orbit_normal_form(const BilliardTable& table, const PeriodicOrbit& orbit,
                             int invariants = 3, int order = 8, int base = 0,
                             const StepOptions& options = {});

Real anosov_cocycle_value(const NormalForm& nf);
// (1/2) lambda d^3 F_2 / d xi d eta^2 at the origin of the normalized jet.
Real anosov_cocycle_from_jet(const NormalForm& nf);

struct FrameOptions {
  int arc_degree = 3;          // gamma_k and g_k for k <= arc_degree; at most nf.invariants()
  double anchor_radius = 1e-5; // deep anchors are taken this close to the periodic point
};

struct HomoclinicFrame {
  Real xi_inf;
  Real xi_inf_sq;              // product of the preliminary anchor coordinates
  std::vector<Real> gamma;     // gamma[0] = xi_inf
  std::vector<Real> g;
  Real w1;
  std::vector<Real> a_bar, gamma_bar, g_bar;
  Series correction;           // D as a series in xi eta
  Mat2 gluing_derivative;      // DG at (0, xi_inf)
  int deep_blocks = 0;
  Real frame_identity;         // g0 (gamma1 - w1) - 1
  Real structure_residual;     // deviation of DG from its two-parameter form along the arc
  Real mirror_residual;        // sampled swap test of the two arcs
  Real anchor_residual;        // off-axis component of the deep anchors
};

// nf must come from orbit_normal_form at collision 0 of hs.core.
HomoclinicFrame mirror_normalize(const BilliardTable& table, const NormalForm& nf,
                                 const HomoclinicSegment& hs, const FrameOptions& options = {},
                                 const StepOptions& step = {});

}  // namespace rigidity
