#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rigidity {

// Subshifts of finite type with edge-indexed roof and potential, in double precision.

using Matrix64 = Eigen::MatrixXd;

struct MarkovSystem {
  Eigen::MatrixXi adjacency;
  Matrix64 roof;       // empty when absent
  Matrix64 potential;  // empty when absent

  // Checks irreducibility, aperiodicity and roof positivity.
  static MarkovSystem make(const Eigen::MatrixXi& adjacency, const Matrix64& roof = {},
                           const Matrix64& potential = {});
  int size() const { return static_cast<int>(adjacency.rows()); }
  bool has_roof() const { return roof.size() > 0; }
  MarkovSystem with_roof(const Matrix64& r) const;
  std::vector<std::pair<int, int>> edges() const;
};

struct MarkovMeasure {
  Matrix64 P;
  Eigen::VectorXd pi;

  // Stationary vector by a direct solve; validates stochasticity.
  static MarkovMeasure from_transition(const Matrix64& P);
  double stationarity_residual() const;
  // pi_i P_ij, the measure of the 2-cylinder [ij]
  Matrix64 edge_mass() const;
  bool compatible(const MarkovSystem& sys) const;
};

struct PerronData {
  double root = 0;
  double lower = 0, upper = 0;  // Collatz-Wielandt bounds
  Eigen::VectorXd right, left;  // positive, right normalized to unit sum, left with left.right = 1
  int iterations = 0;
};

// Perron root and vectors of a primitive nonnegative matrix.
PerronData perron(const Matrix64& M, double tol = 1e-15);

bool is_primitive(const Eigen::MatrixXi& A);

double sft_entropy(const MarkovSystem& sys);
double markov_entropy(const MarkovMeasure& mu);
MarkovMeasure parry_measure(const MarkovSystem& sys);
double pressure(const MarkovSystem& sys, const Matrix64& psi);
MarkovMeasure equilibrium_measure(const MarkovSystem& sys, const Matrix64& psi);
double integrate(const MarkovMeasure& mu, const Matrix64& f);

// The s with pressure(-s r) = 0.
double suspension_htop(const MarkovSystem& sys);
double abramov(const MarkovMeasure& mu, const MarkovSystem& sys);

// One-parameter family from the Parry measure (t = 0) to a measure concentrated near a cycle
// (t = 1).
MarkovMeasure interpolated_measure(const MarkovSystem& sys, double t);

// L-block presentation: states are the admissible words of length L, edges the words of
// length L + 1. Roof and potential lift along the last transition.
struct BlockPresentation {
  MarkovSystem system;
  std::vector<std::vector<int>> words;
};

BlockPresentation block_presentation(const MarkovSystem& sys, int L);
MarkovMeasure lift_measure(const BlockPresentation& block, const MarkovMeasure& mu);

enum class FlexRegion { I, II };

struct FlexibilityResult {
  MarkovSystem system;  // presentation carrying measure and roof
  int block_length = 1;
  MarkovMeasure measure;
  Matrix64 roof;
  double measure_parameter = 0;
  double roof_parameter = 0;  // t of the region I homotopy, delta of region II
  int avoided_state = -1;     // region II, state of the block presentation
  std::vector<int> avoided_word;
  double c_mu = 0, c_top = 0; // achieved
  double residual = 0;
};

FlexibilityResult solve_flexibility(const MarkovSystem& sys, double c_mu, double c_top,
                                    FlexRegion region);

// Roof equal to delta off the cylinder [k], normalized to unit mu-integral.
Matrix64 concentrated_roof(const MarkovSystem& sys, const MarkovMeasure& mu, int k, double delta);
// Region II searches block lengths up to this for a cylinder whose complement has entropy.
inline constexpr int kMaxBlockLength = 6;
// -log P / h(mu): the roof for which mu is the measure of maximal entropy.
Matrix64 jacobian_roof(const MarkovSystem& sys, const MarkovMeasure& mu);

struct BumpOptions {
  int n_start = 8;
  int n_ceiling = 4096;
  double alpha = 0.25;  // off-diagonal mass of B allowed
};

struct SeparatingBump {
  int N = 0;                  // cylinder length in edges
  Eigen::MatrixXi g;          // integer edge function distinguishing the measures
  double g_values[3] = {0, 0, 0};
  double eta = 0;
  double a[3] = {0, 0, 0};
  double floor = 0;           // additive constant, gamma / 2
  Eigen::Matrix3d B;          // B(i, j) = omega_i(U_j)
  double integrals[3] = {0, 0, 0};

  // q on the cylinder given by N + 1 states
  double value(const std::vector<int>& word) const;
  int cls(const std::vector<int>& word) const;
};

SeparatingBump separating_bump(const MarkovSystem& sys, const MarkovMeasure& w1,
                               const MarkovMeasure& w2, const MarkovMeasure& w3, double gamma,
                               const BumpOptions& options = {});
// Mass of each bump class under mu.
Eigen::Vector3d bump_class_mass(const SeparatingBump& q, const MarkovMeasure& mu);

struct SweepPoint {
  double s = 0, t = 0;
  double h_mu_flow = 0;
  double h_top_flow = 0;
};

// Edge function q >= gamma / 2 with integrals (1, 1, gamma) against (w1, w2, w3), supported on
// three edges above the floor. Raises infeasible when no edge triple works.
Matrix64 edge_bump(const MarkovSystem& sys, const MarkovMeasure& w1, const MarkovMeasure& w2,
                   const MarkovMeasure& w3, double gamma);

// r_{s,t} = (1-s)((1-t) + t q) + s phi on the boundary of [0,1]^2, `grid` points per side.
// q is the edge bump of (mu, Parry, rho), phi the Jacobian roof of mu.
std::vector<SweepPoint> roof_family_sweep(const MarkovSystem& sys, const MarkovMeasure& mu,
                                          const MarkovMeasure& rho, double gamma, int grid);

}  // namespace rigidity
