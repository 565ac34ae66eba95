#pragma once

#include "rigidity/billiard.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/geometry.hpp"
#include "rigidity/jet.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_support {

inline std::string config_path(const std::string& name) {
  return std::string(RIGIDITY_CONFIG_DIR) + "/" + name;
}

inline std::vector<std::string> bundled_tables() {
  return {"three-disks.cfg", "three-disks-asym.cfg", "mixed.cfg"};
}

// Random phase points whose forward step hits an obstacle away from grazing.
inline std::vector<rigidity::PhasePoint> random_hitting_points(const rigidity::BilliardTable& t,
                                                               std::mt19937_64& rng, int count,
                                                               double max_angle = 1.3) {
  using namespace rigidity;
  std::vector<PhasePoint> out;
  std::uniform_int_distribution<int> pick(0, t.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    PhasePoint x;
    x.obstacle = pick(rng);
    x.s = Real(unit(rng)) * t[x.obstacle].perimeter();
    x.phi = Real((2 * unit(rng) - 1) * max_angle);
    try {
      StepResult r = billiard_step(t, x);
      if (abs(r.next.phi) > max_angle) continue;
      out.push_back(x);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::escape && e.kind() != ErrorKind::grazing) throw;
    }
  }
  return out;
}

// Random area-preserving polynomial jet: an SL(2) map after two polynomial shears.
inline rigidity::JetMap random_symplectic_jet(std::mt19937_64& rng, int order, int degree = 5,
                                              double size = 0.3) {
  using namespace rigidity;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet2 xi = Jet2::variable(order, 0), eta = Jet2::variable(order, 1);
  Jet2 f(order), h(order);
  for (int k = 2; k <= degree; ++k) {
    f.coeff(0, k) = Real(size * u(rng));
    h.coeff(k, 0) = Real(size * u(rng));
  }
  JetMap shear1{xi + f, eta};
  JetMap shear2{xi, eta + h};
  Real a = Real(1.0 + 0.5 * u(rng)), b = Real(u(rng)), c = Real(u(rng));
  Mat2 m{a, b, c, (1 + b * c) / a};
  return compose(JetMap::linear_map(order, m), compose(shear1, shear2));
}

}  // namespace testing_support
