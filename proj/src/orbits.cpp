#include "rigidity/orbits.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rigidity {

namespace {

struct Local {
  Vec2 q, t, k;  // position, unit tangent, second derivative
};

Local local_at(const ObstacleCurve& c, const Real& s) {
  auto d = c.eval(s, 2);
  return {d[0], d[1], d[2]};
}

Vec2 unit(const Vec2& v, Real* len) {
  *len = norm(v);
  return {v.x / *len, v.y / *len};
}

// Length-minimizing chain of collisions, cyclic or with both ends pinned.
class Chain {
 public:
  Chain(const BilliardTable& table, std::vector<int> obstacles, bool cyclic, Vec2 pin_before = {},
        Vec2 pin_after = {})
      : table_(table), obs_(std::move(obstacles)), cyclic_(cyclic), pin_before_(pin_before),
        pin_after_(pin_after) {}

  int size() const { return static_cast<int>(obs_.size()); }

  std::vector<Local> locals(const std::vector<Real>& s) const {
    std::vector<Local> out(size());
    for (int j = 0; j < size(); ++j) out[j] = local_at(table_[obs_[j]], s[j]);
    return out;
  }

  Vec2 prev_point(const std::vector<Local>& loc, int j) const {
    if (j > 0) return loc[j - 1].q;
    return cyclic_ ? loc[size() - 1].q : pin_before_;
  }
  Vec2 next_point(const std::vector<Local>& loc, int j) const {
    if (j + 1 < size()) return loc[j + 1].q;
    return cyclic_ ? loc[0].q : pin_after_;
  }

  Real length(const std::vector<Local>& loc) const {
    Real total = 0;
    for (int j = 0; j < size(); ++j) total += norm(next_point(loc, j) - loc[j].q);
    if (!cyclic_) total += norm(loc[0].q - pin_before_);
    return total;
  }

  Real gradient_at(const std::vector<Local>& loc, int j) const {
    Real l1, l2;
    Vec2 uin = unit(loc[j].q - prev_point(loc, j), &l1);
    Vec2 uout = unit(next_point(loc, j) - loc[j].q, &l2);
    return dot(loc[j].t, uin) - dot(loc[j].t, uout);
  }

  std::vector<Real> gradient(const std::vector<Local>& loc) const {
    std::vector<Real> g(size());
    for (int j = 0; j < size(); ++j) g[j] = gradient_at(loc, j);
    return g;
  }

  Real diagonal_at(const std::vector<Local>& loc, int j) const {
    Real l1, l2;
    Vec2 uin = unit(loc[j].q - prev_point(loc, j), &l1);
    Vec2 uout = unit(next_point(loc, j) - loc[j].q, &l2);
    return sqr(cross(uin, loc[j].t)) / l1 + dot(uin, loc[j].k) + sqr(cross(uout, loc[j].t)) / l2 -
           dot(uout, loc[j].k);
  }

  // Tridiagonal Hessian; upper[j] couples j and j+1 (cyclically when closed).
  void hessian(const std::vector<Local>& loc, std::vector<Real>* lower, std::vector<Real>* diag,
               std::vector<Real>* upper) const {
    const int n = size();
    diag->assign(n, Real(0));
    upper->assign(n, Real(0));
    lower->assign(n, Real(0));
    for (int j = 0; j < n; ++j) (*diag)[j] = diagonal_at(loc, j);
    for (int j = 0; j < n; ++j) {
      if (!cyclic_ && j == n - 1) break;
      int k = (j + 1) % n;
      Real l;
      Vec2 u = unit(loc[k].q - loc[j].q, &l);
      Real c = -cross(u, loc[j].t) * cross(u, loc[k].t) / l;
      (*upper)[j] = c;
      (*lower)[k] = c;
    }
  }

  std::vector<Real> wrap_all(std::vector<Real> s) const {
    for (int j = 0; j < size(); ++j) s[j] = wrap(s[j], table_[obs_[j]].perimeter());
    return s;
  }

  // Coordinate sweeps followed by Newton; returns the final max |gradient|.
  Real solve(std::vector<Real>* s, const OrbitOptions& options) const {
    const int n = size();
    std::vector<Local> loc = locals(*s);
    for (int sweep = 0; sweep < options.descent_sweeps; ++sweep) {
      Real worst = 0;
      for (int j = 0; j < n; ++j) {
        Real g = gradient_at(loc, j);
        Real h = diagonal_at(loc, j);
        worst = std::max(worst, Real(abs(g)));
        Real step = h > 0 ? -g / h : -g;
        Real cap = table_[obs_[j]].perimeter() / 8;
        if (abs(step) > cap) step = step > 0 ? cap : -cap;
        (*s)[j] += step;
        loc[j] = local_at(table_[obs_[j]], (*s)[j]);
      }
      if (worst < 1e-8) break;
    }

    Real floor = ldexp(Real(1), 24 - precision_bits());
    std::vector<Real> g = gradient(loc);
    Real res = max_abs(g);
    int stalls = 0;
    for (int it = 0; it < options.max_newton && res > floor; ++it) {
      std::vector<Real> lower, diag, upper;
      hessian(loc, &lower, &diag, &upper);
      std::vector<Real> rhs(n);
      for (int j = 0; j < n; ++j) rhs[j] = -g[j];
      std::vector<Real> delta = solve_tridiagonal(lower, diag, upper, rhs, cyclic_);
      Real slope = 0;
      for (int j = 0; j < n; ++j) slope += g[j] * delta[j];
      if (slope >= 0) {
        for (int j = 0; j < n; ++j) delta[j] = -g[j] / std::max(Real(abs(diag[j])), Real(1));
        slope = 0;
        for (int j = 0; j < n; ++j) slope += g[j] * delta[j];
      }
      Real len0 = length(loc);
      Real alpha = 1;
      bool accepted = false;
      std::vector<Real> trial(n);
      std::vector<Local> tloc;
      std::vector<Real> tg;
      for (int ls = 0; ls < 60; ++ls) {
        for (int j = 0; j < n; ++j) trial[j] = (*s)[j] + alpha * delta[j];
        tloc = locals(trial);
        tg = gradient(tloc);
        Real tres = max_abs(tg);
        Real tlen = length(tloc);
        if (tlen <= len0 + Real("1e-4") * alpha * slope || tres < res / 2) {
          accepted = true;
          break;
        }
        alpha /= 2;
      }
      if (!accepted) break;
      Real new_res = max_abs(tg);
      stalls = new_res > res / 2 ? stalls + 1 : 0;
      *s = trial;
      loc = std::move(tloc);
      g = std::move(tg);
      res = new_res;
      if (stalls >= 3 && res < options.residual_target) break;
    }
    *s = wrap_all(*s);
    return res;
  }

  static Real max_abs(const std::vector<Real>& v) {
    Real m = 0;
    for (const auto& x : v) m = std::max(m, Real(abs(x)));
    return m;
  }

  // Outgoing phase points given converged parameters.
  std::vector<PhasePoint> phase_points(const std::vector<Real>& s, std::vector<Real>* flights) const {
    std::vector<Local> loc = locals(s);
    std::vector<PhasePoint> out(size());
    flights->assign(size(), Real(0));
    for (int j = 0; j < size(); ++j) {
      Real l;
      Vec2 u = unit(next_point(loc, j) - loc[j].q, &l);
      Vec2 nrm{loc[j].t.y, -loc[j].t.x};
      out[j] = {obs_[j], s[j], atan2(dot(u, loc[j].t), dot(u, nrm))};
      (*flights)[j] = l;
    }
    return out;
  }

 private:
  const BilliardTable& table_;
  std::vector<int> obs_;
  bool cyclic_;
  Vec2 pin_before_, pin_after_;
};

// Arclength of the point of obstacle c nearest to target.
Real nearest_arclength(const ObstacleCurve& c, const Vec2& target) {
  auto samples = c.samples(64);
  double tx = to_double(target.x), ty = to_double(target.y);
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 64; ++k) {
    double d = std::hypot(samples[k][0] - tx, samples[k][1] - ty);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  Real t = 2 * pi() * best / 64;
  for (int it = 0; it < 30; ++it) {
    auto tay = c.param_taylor(t, 2);
    Vec2 w{tay[0][0] - target.x, tay[1][0] - target.y};
    Vec2 d1{tay[0][1], tay[1][1]}, d2{2 * tay[0][2], 2 * tay[1][2]};
    Real f = dot(w, d1), df = dot(d1, d1) + dot(w, d2);
    if (df <= 0) break;
    Real step = f / df;
    if (abs(step) > 0.5) step = step > 0 ? Real("0.5") : Real("-0.5");
    t -= step;
    if (abs(step) < 1e-12) break;
  }
  return wrap(c.arclength_at_param(t), c.perimeter());
}

std::vector<int> obstacles_of(const SymbolicWord& w) {
  std::vector<int> o;
  for (int v : w.symbols) o.push_back(v - 1);
  return o;
}

void check_angles(const std::vector<PhasePoint>& pts, const StepOptions& options,
                  const std::string& what) {
  for (const auto& x : pts)
    if (abs(x.phi) >= pi() / 2 - options.grazing_guard)
      fail(ErrorKind::grazing, what + ": collision angle beyond the grazing guard");
}

}  // namespace

Mat2 step_derivative(const BilliardTable& table, const PhasePoint& from, const PhasePoint& to,
                     const StepOptions& options) {
  return jet_collision_step_to(table, from, 1, to.obstacle, to.s, options).map.linear();
}

PeriodicOrbit find_periodic_orbit(const BilliardTable& table, const SymbolicWord& word,
                                  const OrbitOptions& options) {
  require(word.cyclic, "periodic orbit needs a cyclic word");
  require(word.size() >= 2, "periodic word needs length >= 2");
  require_admissible(word, table.size());
  const int p = word.size();
  std::vector<int> obs = obstacles_of(word);
  std::vector<Real> s(p);
  for (int j = 0; j < p; ++j) {
    const Vec2& a = table[obs[(j + p - 1) % p]].center();
    const Vec2& b = table[obs[(j + 1) % p]].center();
    s[j] = nearest_arclength(table[obs[j]], Real("0.5") * (a + b));
  }
  Chain chain(table, obs, true);
  Real res = chain.solve(&s, options);
  if (!(res < options.residual_target)) {
    fail(ErrorKind::nonconvergence, "periodic orbit " + word.str() +
                                        " did not converge, last residual " + to_string(res, 6));
  }
  PeriodicOrbit orb;
  orb.word = word;
  orb.stationarity = res;
  orb.points = chain.phase_points(s, &orb.flights);
  check_angles(orb.points, options.step, "periodic orbit " + word.str());
  orb.flow_period = 0;
  for (const auto& f : orb.flights) orb.flow_period += f;
  Mat2 m = Mat2::identity();
  for (int j = 0; j < p; ++j)
    m = step_derivative(table, orb.points[j], orb.points[(j + 1) % p], options.step) * m;
  orb.monodromy = m;
  SaddleEigen e = saddle_eigen(m);
  orb.lambda = e.stable;
  orb.le = -log(abs(e.stable)) / p;
  orb.stable_dir = e.stable_dir;
  orb.unstable_dir = e.unstable_dir;
  return orb;
}

Real orbit_flow_exponent(const PeriodicOrbit& orbit) {
  return -log(abs(orbit.lambda)) / orbit.flow_period;
}

HomoclinicSegment find_homoclinic_segment(const BilliardTable& table, const SymbolicWord& block,
                                          const SymbolicWord& connector, int depth,
                                          const OrbitOptions& options) {
  return find_homoclinic_segment(table, find_periodic_orbit(table, block, options), connector,
                                 depth, options);
}

HomoclinicSegment find_homoclinic_segment(const BilliardTable& table, const PeriodicOrbit& core,
                                          const SymbolicWord& connector, int depth,
                                          const OrbitOptions& options) {
  const SymbolicWord& block = core.word;
  require(depth >= 2, "homoclinic depth must be at least 2");
  require(!(SymbolicWord{connector.symbols, true} == SymbolicWord{block.symbols, true}),
          "connector must differ from the block");
  SymbolicWord w;
  w.cyclic = false;
  for (int k = 0; k < depth; ++k) w.symbols.insert(w.symbols.end(), block.symbols.begin(), block.symbols.end());
  w.symbols.insert(w.symbols.end(), connector.symbols.begin(), connector.symbols.end());
  for (int k = 0; k < depth; ++k) w.symbols.insert(w.symbols.end(), block.symbols.begin(), block.symbols.end());
  // The pinned ends continue the periodic word on both sides.
  SymbolicWord ext = w;
  ext.symbols.insert(ext.symbols.begin(), block.symbols.back());
  ext.symbols.push_back(block.symbols.front());
  ext.cyclic = false;
  require_admissible(ext, table.size());

  const int pb = block.size();
  const int n = w.size();
  std::vector<int> obs = obstacles_of(w);
  std::vector<Real> s(n);
  for (int j = 0; j < n; ++j) {
    bool in_connector = j >= depth * pb && j < depth * pb + connector.size();
    if (!in_connector) {
      int idx = j < depth * pb ? j % pb : (j - depth * pb - connector.size()) % pb;
      s[j] = core.points[idx].s;
    } else {
      int prev = j == 0 ? block.symbols.back() - 1 : obs[j - 1];
      int next = j + 1 < n ? obs[j + 1] : block.symbols.front() - 1;
      s[j] = nearest_arclength(table[obs[j]],
                               Real("0.5") * (table[prev].center() + table[next].center()));
    }
  }
  Vec2 pin_before = position(table, core.points[pb - 1]);
  Vec2 pin_after = position(table, core.points[0]);
  Chain chain(table, obs, false, pin_before, pin_after);
  Real res = chain.solve(&s, options);
  if (!(res < options.residual_target))
    fail(ErrorKind::nonconvergence, "homoclinic segment " + w.str() +
                                        " did not converge, last residual " + to_string(res, 6));
  HomoclinicSegment hs;
  hs.core = core;
  hs.block = block;
  hs.connector = connector;
  hs.depth = depth;
  hs.stationarity = res;
  hs.points = chain.phase_points(s, &hs.flights);
  check_angles(hs.points, options.step, "homoclinic segment");
  hs.anchor1 = (depth - 1) * pb;
  hs.anchor2 = depth * pb + connector.size();

  // Unstable direction pushed forward from the start, stable direction pulled back from the end.
  Vec2 u = core.unstable_dir;
  for (int j = 0; j < hs.anchor1; ++j) {
    u = step_derivative(table, hs.points[j], hs.points[j + 1], options.step) * u;
    Real l = norm(u);
    u = {u.x / l, u.y / l};
  }
  Vec2 st = core.stable_dir;
  for (int j = n - 1; j >= hs.anchor1; --j) {
    const PhasePoint& to = j + 1 < n ? hs.points[j + 1] : core.points[0];
    st = step_derivative(table, hs.points[j], to, options.step).inverse() * st;
    Real l = norm(st);
    st = {st.x / l, st.y / l};
  }
  hs.unstable_dir = u;
  hs.stable_dir = st;
  hs.transversality_angle = abs(asin(cross(u, st)));
  if (hs.transversality_angle < options.transversality_floor)
    fail(ErrorKind::degenerate, "homoclinic intersection is not transverse (angle " +
                                    to_string(hs.transversality_angle, 6) + ")");
  return hs;
}

}  // namespace rigidity
