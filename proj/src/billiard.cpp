#include "rigidity/billiard.hpp"

#include "rigidity/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rigidity {

namespace {

void check_grazing(const Real& phi, const StepOptions& options, const char* where) {
  if (abs(phi) >= pi() / 2 - options.grazing_guard) {
    std::ostringstream os;
    os << "near-grazing " << where << " angle phi = " << to_string(phi, 12);
    fail(ErrorKind::grazing, os.str());
  }
}

Vec2 normal_of(const Vec2& t) { return {t.y, -t.x}; }

struct Hit {
  Real param;
  Real flight;
};

// Safeguarded Newton for cross(v, gamma(t) - p) = 0 on [lo, hi].
bool refine_hit(const ObstacleCurve& c, const Vec2& p, const Vec2& v, Real lo, Real hi,
                Hit* out) {
  auto f = [&](const Real& t, Real* df) {
    auto tay = c.param_taylor(t, 1);
    Vec2 q{tay[0][0], tay[1][0]};
    *df = cross(v, Vec2{tay[0][1], tay[1][1]});
    return cross(v, q - p);
  };
  Real dlo, dhi;
  Real flo = f(lo, &dlo), fhi = f(hi, &dhi);
  if (flo == 0) {
    hi = lo;
  } else if (fhi == 0) {
    lo = hi;
  } else if ((flo > 0) == (fhi > 0)) {
    return false;
  }
  Real t = (lo + hi) / 2;
  Real tol = ldexp(Real(1), 8 - precision_bits());
  for (int it = 0; it < 400; ++it) {
    Real d;
    Real ft = f(t, &d);
    if (ft == 0) break;
    if ((ft > 0) == (flo > 0)) lo = t;
    else hi = t;
    if (d != 0 && abs(ft / d) < tol * (1 + abs(t))) {
      t -= ft / d;
      break;
    }
    Real next = d != 0 ? t - ft / d : (lo + hi) / 2;
    if (next <= lo || next >= hi) next = (lo + hi) / 2;
    Real step = abs(next - t);
    t = next;
    if (step < tol * (1 + abs(t))) break;
  }
  Vec2 q = c.point_at_param(t);
  out->param = t;
  out->flight = dot(v, q - p);
  return true;
}

StepResult finish_step(const BilliardTable& table, int target, const Real& param,
                       const Vec2& v, const Real& flight, const StepOptions& options) {
  const ObstacleCurve& c = table[target];
  Real s = wrap(c.arclength_at_param(param), c.perimeter());
  Vec2 vel = c.velocity_at_param(param);
  Real sp = norm(vel);
  Vec2 t{vel.x / sp, vel.y / sp};
  Real phi = atan2(dot(v, t), -dot(v, normal_of(t)));
  StepResult r{PhasePoint{target, s, phi}, flight};
  check_grazing(r.next.phi, options, "outgoing");
  return r;
}

}  // namespace

Vec2 position(const BilliardTable& table, const PhasePoint& x) {
  return table[x.obstacle].eval(x.s, 0)[0];
}

Vec2 velocity(const BilliardTable& table, const PhasePoint& x) {
  Vec2 t = table[x.obstacle].eval(x.s, 1)[1];
  Vec2 n = normal_of(t);
  return cos(x.phi) * n + sin(x.phi) * t;
}

Real outgoing_angle(const BilliardTable& table, int obstacle, const Real& s, const Vec2& v) {
  Vec2 t = table[obstacle].eval(s, 1)[1];
  Vec2 n = normal_of(t);
  // Reflect: the outgoing velocity has normal component -v.n and tangential component v.t.
  return atan2(dot(v, t), -dot(v, n));
}

StepResult billiard_step(const BilliardTable& table, const PhasePoint& x,
                         const StepOptions& options) {
  check_grazing(x.phi, options, "incoming");
  auto jet = table[x.obstacle].eval(x.s, 1);
  Vec2 p = jet[0];
  Vec2 t = jet[1];
  Vec2 v = cos(x.phi) * normal_of(t) + sin(x.phi) * t;
  const double px = to_double(p.x), py = to_double(p.y);
  const double vx = to_double(v.x), vy = to_double(v.y);

  bool found = false;
  Hit best;
  int best_obstacle = -1;
  Real runner_up = -1;
  for (int j = 0; j < table.size(); ++j) {
    if (j == x.obstacle) continue;
    const ObstacleCurve& c = table[j];
    double cx = to_double(c.center().x) - px, cy = to_double(c.center().y) - py;
    double br = c.bounding_radius() * (1 + 1e-9) + 1e-12;
    if (vx * cx + vy * cy + br < 0) continue;
    if (std::abs(vx * cy - vy * cx) > br) continue;
    const int n = options.bracket_nodes;
    auto samples = c.samples(n);
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = vx * (samples[k][1] - py) - vy * (samples[k][0] - px);
    const Real two_pi = 2 * pi();
    for (int k = 0; k < n; ++k) {
      int k2 = (k + 1) % n;
      if ((f[k] > 0) == (f[k2] > 0) && f[k] != 0) continue;
      Hit h;
      Real lo = two_pi * k / n, hi = two_pi * (k + 1) / n;
      if (!refine_hit(c, p, v, lo, hi, &h)) continue;
      if (h.flight <= 0) continue;
      if (!found || h.flight < best.flight) {
        if (found && best_obstacle != j) runner_up = best.flight;
        found = true;
        best = h;
        best_obstacle = j;
      } else if (best_obstacle != j && (runner_up < 0 || h.flight < runner_up)) {
        runner_up = h.flight;
      }
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "ray escapes the table in direction (" << vx << ", " << vy << ")";
    fail(ErrorKind::escape, os.str());
  }
  if (runner_up >= 0 && abs(runner_up - best.flight) < 1e-12)
    fail(ErrorKind::internal, "tie between obstacles in next-collision search");
  return finish_step(table, best_obstacle, best.param, v, best.flight, options);
}

StepResult billiard_step_to(const BilliardTable& table, const PhasePoint& x, int target,
                            const Real& s_guess, const StepOptions& options) {
  check_grazing(x.phi, options, "incoming");
  auto jet = table[x.obstacle].eval(x.s, 1);
  Vec2 p = jet[0];
  Vec2 v = cos(x.phi) * normal_of(jet[1]) + sin(x.phi) * jet[1];
  const ObstacleCurve& c = table[target];
  Real t = c.param_at_arclength(s_guess);
  Real tol = ldexp(Real(1), 8 - precision_bits());
  for (int it = 0; it < 100; ++it) {
    auto tay = c.param_taylor(t, 1);
    Real f = cross(v, Vec2{tay[0][0], tay[1][0]} - p);
    Real df = cross(v, Vec2{tay[0][1], tay[1][1]});
    Real step = f / df;
    t -= step;
    if (abs(step) < tol * (1 + abs(t))) {
      Real flight = dot(v, c.point_at_param(t) - p);
      if (flight <= 0) fail(ErrorKind::nonconvergence, "targeted step found a point behind the ray");
      return finish_step(table, target, t, v, flight, options);
    }
  }
  fail(ErrorKind::nonconvergence, "targeted collision solve did not converge");
}

namespace {

CollisionJet collision_jet(const BilliardTable& table, const PhasePoint& x, int order,
                           const StepResult& step) {
  const int k = order;
  auto src = table[x.obstacle].taylor(x.s, k + 1);
  auto dst = table[step.next.obstacle].taylor(step.next.s, k + 1);
  Jet2 ds = Jet2::variable(k, 0), dphi = Jet2::variable(k, 1);

  Jet2 px = apply_series(src[0], ds), py = apply_series(src[1], ds);
  Jet2 tx = apply_series(src[0].derivative(), ds), ty = apply_series(src[1].derivative(), ds);
  Jet2 c = apply_series(cos_series(x.phi, k), dphi), s = apply_series(sin_series(x.phi, k), dphi);
  // v = cos(phi) n + sin(phi) T with n = (T_y, -T_x)
  Jet2 vx = c * ty + s * tx, vy = s * ty - c * tx;

  Series qx_s = dst[0], qy_s = dst[1];
  Series tqx_s = dst[0].derivative(), tqy_s = dst[1].derivative();
  Mat2 lin{vx.value(), -tqx_s[0], vy.value(), -tqy_s[0]};
  if (abs(lin.det()) < Real("1e-30")) fail(ErrorKind::internal, "singular collision system");
  Mat2 inv = lin.inverse();

  Jet2 tau(k), sigma(k);
  for (int pass = 0; pass <= k; ++pass) {
    Jet2 ex = px + (tau + step.flight) * vx - apply_series(qx_s, sigma);
    Jet2 ey = py + (tau + step.flight) * vy - apply_series(qy_s, sigma);
    tau -= inv.a * ex + inv.b * ey;
    sigma -= inv.c * ex + inv.d * ey;
    tau.value() = 0;
    sigma.value() = 0;
  }
  Jet2 tqx = apply_series(tqx_s, sigma), tqy = apply_series(tqy_s, sigma);
  Jet2 sin_out = vx * tqx + vy * tqy;
  const Real& phi1 = step.next.phi;
  Series sin1 = sin_series(phi1, k);
  Real cos1 = cos(phi1);
  Jet2 psi(k);
  for (int pass = 0; pass <= k; ++pass) {
    Jet2 r = apply_series(sin1, psi) - sin_out;
    psi -= r * (1 / cos1);
    psi.value() = 0;
  }
  CollisionJet out;
  out.map = {sigma + step.next.s, psi + phi1};
  out.step = step;
  out.flight = tau + step.flight;
  return out;
}

}  // namespace

CollisionJet jet_collision_step(const BilliardTable& table, const PhasePoint& x, int order,
                                const StepOptions& options) {
  if (order > options.jet_ceiling)
    fail(ErrorKind::capability, "jet order " + std::to_string(order) + " above ceiling " +
                                    std::to_string(options.jet_ceiling));
  return collision_jet(table, x, order, billiard_step(table, x, options));
}

CollisionJet jet_collision_step_to(const BilliardTable& table, const PhasePoint& x, int order,
                                   int target, const Real& s_guess, const StepOptions& options) {
  if (order > options.jet_ceiling)
    fail(ErrorKind::capability, "jet order " + std::to_string(order) + " above ceiling " +
                                    std::to_string(options.jet_ceiling));
  return collision_jet(table, x, order, billiard_step_to(table, x, target, s_guess, options));
}

Mat2 billiard_derivative(const BilliardTable& table, const PhasePoint& x,
                         const StepOptions& options) {
  return jet_collision_step(table, x, 1, options).map.linear();
}

}  // namespace rigidity
