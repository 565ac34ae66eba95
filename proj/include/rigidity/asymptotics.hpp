#pragma once

#include "rigidity/normal_form.hpp"
#include "rigidity/orbits.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rigidity {

struct HorseshoeRow {
  int n = 0;
  int map_period = 0;
  Real le;           // per collision
  Real flow_period;
  Real trace;        // trace of the monodromy, 2 cosh(map_period le) up to sign
  Real stationarity;
  std::vector<PhasePoint> points;
};

struct HorseshoeFamily {
  std::string table;
  SymbolicWord block, connector;
  Real lambda;       // contracting multiplier of the block orbit
  Real le_ref;
  Real l0;           // flow period of the block orbit
  std::vector<HorseshoeRow> rows;
};

// Largest n the working precision supports for the block multiplier lambda.
int horseshoe_n_ceiling(const Real& lambda);

HorseshoeFamily horseshoe_family(const BilliardTable& table, const SymbolicWord& block,
                                 const SymbolicWord& connector, int n_max,
                                 const OrbitOptions& options = {});

// Rows generated from explicit normal-form data: Delta (a[0] = lambda), the arc gamma
// (gamma[0] = xi_inf) and the gluing function g. Flow periods are n l0 + l1.
struct SyntheticGluing {
  std::vector<Real> a;
  std::vector<Real> gamma;
  std::vector<Real> g;
  Real l0 = 1, l1 = 0;
};

HorseshoeFamily synthetic_family(const SyntheticGluing& data, int n_min, int n_max);
// Rows of a flow with equal exponents: trace 2 cosh(h l_n), l_n = n l0 + l1 + c lambda^n.
HorseshoeFamily synthetic_equal_exponent_family(const Real& h, const Real& l0, const Real& l1,
                                                const Real& c, int n_min, int n_max);

struct FitCoefficient {
  std::string name;
  Real value;
  Real uncertainty;
};

struct FitReport {
  std::string model;
  std::vector<FitCoefficient> coefficients;
  std::vector<int> ns;
  std::vector<Real> residuals;
  std::vector<Real> decay_ratios;  // residuals[i+1] / residuals[i]
  Real residual_floor;             // relative arithmetic floor of the rows

  const FitCoefficient& get(const std::string& name) const;
  bool has(const std::string& name) const;
};

struct FitOptions {
  int n_min = 2;  // smallest n used
  int n_max = -1; // largest n used, all rows when negative
};

FitReport fit_period_expansion(const HorseshoeFamily& family, const FitOptions& options = {});
FitReport fit_trace_expansion(const HorseshoeFamily& family, const Real& lambda,
                              const FitOptions& options = {});
// Coefficients L_{q,p}, q <= p <= P, named "L<q><p>". `only` restricts the (q, p) set.
FitReport fit_series(const HorseshoeFamily& family, const Real& lambda, int P,
                     const std::vector<std::pair<int, int>>& only = {},
                     const FitOptions& options = {});
std::string series_name(int q, int p);

struct OrbitDiagnostic {
  std::string word;
  Real flow_exponent;
  Real lambda;
  Real flow_period;
  Real a1;
  Real a1_uncertainty;
  Real cohomology_defect;  // log J^u - h_ref * period
};

struct RigidityReport {
  std::vector<OrbitDiagnostic> orbits;
  Real h_ref;
  Real dispersion;
  Real dispersion_tolerance;
  std::string verdict;
  std::vector<std::string> reasons;
};

inline const char* kVerdictObstructed = "MME=SRB obstructed";
inline const char* kVerdictNoObstruction = "no obstruction found at tested order";
inline const char* kVerdictInconclusive = "inconclusive";

// Fills h_ref, dispersion, defects and the verdict from per-orbit data.
RigidityReport rigidity_verdict(std::vector<OrbitDiagnostic> orbits,
                                const Real& dispersion_tolerance);

RigidityReport rigidity_report(const BilliardTable& table, const std::vector<SymbolicWord>& words,
                               const OrbitOptions& options = {},
                               double dispersion_tolerance = 1e-30);

}  // namespace rigidity
