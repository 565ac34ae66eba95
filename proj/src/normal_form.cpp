#include "rigidity/normal_form.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>

namespace rigidity {

namespace {

Jet2 int_power(const Jet2& u, int n) {
  Jet2 base = n < 0 ? reciprocal(u) : u;
  int e = n < 0 ? -n : n;
  Jet2 result = Jet2::constant(u.order(), Real(1));
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Jet2 polynomial_of(const std::vector<Real>& coef, const Jet2& z) {
  Jet2 r = Jet2::constant(z.order(), Real(0));
  for (int k = static_cast<int>(coef.size()) - 1; k >= 0; --k) {
    r = r * z;
    r += coef[k];
  }
  return r;
}

// p(x, y) for univariate series x, y (constants included).
Series eval_jet(const Jet2& p, const Series& x, const Series& y) {
  const int k = p.order();
  Series total(x.order());
  for (int a = k; a >= 0; --a) {
    Series inner(x.order());
    for (int b = k - a; b >= 0; --b) {
      inner = inner * y;
      inner[0] += p.coeff(a, b);
    }
    total = total * x;
    total += inner;
  }
  return total;
}

Series truncate(const Series& s, int order) {
  Series r(order);
  for (int k = 0; k <= std::min(order, s.order()); ++k) r[k] = s[k];
  return r;
}

// Time-`time` flow of the vector field (x1, x2) as a Lie series.
JetMap lie_flow(const Jet2& x1, const Jet2& x2, const Real& time) {
  const int order = x1.order();
  Jet2 comps[2] = {Jet2::variable(order, 0), Jet2::variable(order, 1)};
  for (auto& f : comps) {
    Jet2 term = f;
    for (int k = 1; k <= order; ++k) {
      term = (x1 * term.derivative(0) + x2 * term.derivative(1)) * (time / k);
      if (term.max_abs() == 0) break;
      f += term;
    }
  }
  return {comps[0], comps[1]};
}

}  // namespace

Series NormalForm::delta(int order) const {
  Series d(order);
  for (int k = 0; k <= std::min(order, invariants()); ++k) d[k] = a[k];
  return d;
}

JetMap normal_form_power(const std::vector<Real>& a, int power, const Real& xi0, const Real& eta0,
                         int order) {
  Jet2 xi = Jet2::variable(order, 0, xi0), eta = Jet2::variable(order, 1, eta0);
  Jet2 d = int_power(polynomial_of(a, xi * eta), power);
  return {d * xi, reciprocal(d) * eta};
}

JetMap normal_form_map(const std::vector<Real>& a, int order) {
  return normal_form_power(a, 1, Real(0), Real(0), order);
}

JetMap return_map_jet(const BilliardTable& table, const PeriodicOrbit& orbit, int order, int base,
                      const StepOptions& options) {
  const int p = orbit.period();
  require(base >= 0 && base < p, "base collision out of range");
  const PhasePoint& x0 = orbit.points[base];
  JetMap total = JetMap::identity(order);
  total.x.value() = x0.s;
  total.y.value() = x0.phi;
  for (int k = 0; k < p; ++k) {
    const PhasePoint& from = orbit.points[(base + k) % p];
    const PhasePoint& to = orbit.points[(base + k + 1) % p];
    total = compose(jet_collision_step_to(table, from, order, to.obstacle, to.s, options).map, total);
  }
  Real ds = wrap_centered(total.x.value() - x0.s, table[x0.obstacle].perimeter());
  Real dphi = total.y.value() - x0.phi;
  if (abs(ds) + abs(dphi) > ldexp(Real(1), 40 - precision_bits()))
    fail(ErrorKind::internal, "return map does not close up at the orbit");
  total.x.value() = 0;
  total.y.value() = 0;
  return total;
}

JetMap momentum_chart(const Real& phi0, int order) {
  Series sn = sin_series(phi0, order);
  sn[0] = 0;
  Jet2 dphi = Jet2::variable(order, 1);
  Jet2 p = Jet2::constant(order, Real(0));
  for (int k = order; k >= 1; --k) {
    p = (p + sn[k]) * dphi;
  }
  return {Jet2::variable(order, 0), p};
}

NormalForm orbit_normal_form(const BilliardTable& table, const PeriodicOrbit& orbit, int invariants,
                             int order, int base, const StepOptions& options) {
  JetMap g = return_map_jet(table, orbit, order, base, options);
  JetMap chart = momentum_chart(orbit.points[base].phi, order);
  JetMap chart_inv = inverse(chart);
  NormalForm nf = extract_birkhoff(compose(chart, compose(g, chart_inv)), invariants);
  nf.conjugacy = compose(nf.conjugacy, chart);
  nf.inverse = compose(chart_inv, nf.inverse);
  return nf;
}

NormalForm extract_birkhoff(const JetMap& g, int invariants) {
  const int order = g.order();
  require(invariants >= 1, "at least one Birkhoff invariant must be requested");
  require(order >= 2 * invariants + 1, "jet order must be at least 2K+1");
  Mat2 lin = g.linear();
  Real tr = lin.trace();
  if (!(abs(tr) > 2))
    fail(ErrorKind::degenerate, "linear part is not a real saddle (|trace| = " + to_string(abs(tr), 8) + ")");
  SaddleEigen e = saddle_eigen(lin);
  Real det = cross(e.stable_dir, e.unstable_dir);
  Mat2 p{e.stable_dir.x, e.unstable_dir.x / det, e.stable_dir.y, e.unstable_dir.y / det};
  JetMap pmap = JetMap::linear_map(order, p);
  JetMap pinv = JetMap::linear_map(order, p.inverse());
  JetMap rinv = pmap;
  JetMap r = pinv;
  JetMap f = compose(pinv, compose(g.degrees(1, order), pmap));
  const Real l1 = f.x.coeff(1, 0), l2 = f.y.coeff(0, 1);
  std::vector<Real> lpow(order + 1), mpow(order + 1);
  lpow[0] = mpow[0] = 1;
  for (int k = 1; k <= order; ++k) {
    lpow[k] = lpow[k - 1] * l1;
    mpow[k] = mpow[k - 1] * l2;
  }

  for (int d = 2; d <= order; ++d) {
    // Generating Hamiltonian of degree d+1 for the non-resonant part of degree d.
    Jet2 h(order + 1);
    bool any = false;
    for (int a = 0; a <= d; ++a) {
      int b = d - a;
      const Real& c1 = f.x.coeff(a, b);
      if (a != b + 1 && c1 != 0) {
        h.coeff(a, b + 1) = c1 / (lpow[a] * mpow[b] - l1) / (b + 1);
        any = true;
      }
    }
    // The pure xi^(d+1) term of H is seen only by the second component.
    const Real& c2 = f.y.coeff(d, 0);
    if (c2 != 0) {
      h.coeff(d + 1, 0) = -(c2 / (lpow[d] - l2)) / (d + 1);
      any = true;
    }
    if (!any) continue;
    Jet2 x1 = h.derivative(1).truncated(order), x2 = (-h.derivative(0)).truncated(order);
    JetMap phi = lie_flow(x1, x2, Real(1));
    JetMap phi_inv = lie_flow(x1, x2, Real(-1));
    f = compose(phi_inv, compose(f, phi));
    rinv = compose(rinv, phi);
    r = compose(phi_inv, r);
  }

  NormalForm nf;
  nf.order = order;
  nf.lambda = l1;
  const int kmax = (order - 1) / 2;
  nf.a.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) nf.a[k] = f.x.coeff(k + 1, k);
  nf.conjugacy = r;
  nf.inverse = rinv;
  nf.normalized = f;
  JetMap check = compose(r, compose(g.degrees(1, order), rinv));
  nf.residual = (check - normal_form_map(nf.a, order)).max_abs();
  return nf;
}

Real anosov_cocycle_value(const NormalForm& nf) { return -nf.a[1] / nf.lambda; }

Real anosov_cocycle_from_jet(const NormalForm& nf) {
  // d^3/(d xi d eta^2) of c xi eta^2 is 2c.
  return nf.lambda * nf.normalized.y.coeff(1, 2);
}

HomoclinicFrame mirror_normalize(const BilliardTable& table, const NormalForm& nf,
                                 const HomoclinicSegment& hs, const FrameOptions& options,
                                 const StepOptions& step) {
  const PeriodicOrbit& core = hs.core;
  const int pb = core.period();
  const int n = static_cast<int>(hs.points.size());
  const PhasePoint& x = core.points[0];
  const Real per = table[x.obstacle].perimeter();
  const int J = options.arc_degree;
  const int order_g = J + 1;
  require(J >= 1, "arc degree must be at least 1");
  require(order_g <= step.jet_ceiling, "arc degree exceeds the collision jet ceiling");
  require(J <= nf.invariants(), "arc degree exceeds the number of resolved Birkhoff invariants");

  auto displacement = [&](const PhasePoint& y) {
    return Vec2{wrap_centered(y.s - x.s, per), y.phi - x.phi};
  };
  auto size = [](const Vec2& v) { return std::max(Real(abs(v.x)), Real(abs(v.y))); };

  // Deep anchors: j blocks before x1 and after x2, kept two blocks from the pinned ends.
  int j = 0;
  for (int k = 1;; ++k) {
    int i1 = hs.anchor1 - k * pb, i2 = hs.anchor2 + k * pb;
    if (i1 < 2 * pb || i2 > n - 1 - 2 * pb) break;
    if (size(displacement(hs.points[i1])) < options.anchor_radius &&
        size(displacement(hs.points[i2])) < options.anchor_radius) {
      j = k;
      break;
    }
  }
  if (j == 0)
    fail(ErrorKind::degenerate,
         "homoclinic segment too shallow for deep anchors; increase the depth");
  const int i1 = hs.anchor1 - j * pb, i2 = hs.anchor2 + j * pb;
  Vec2 d1 = displacement(hs.points[i1]), d2 = displacement(hs.points[i2]);
  Vec2 y1 = nf.conjugacy.evaluate(d1.x, d1.y);
  Vec2 y2 = nf.conjugacy.evaluate(d2.x, d2.y);

  // Gluing map in preliminary normal coordinates between the deep anchors.
  JetMap f = shift(nf.inverse, Real(0), y1.y).truncated(order_g);
  for (int k = i1; k < i2; ++k) {
    const PhasePoint& to = hs.points[k + 1];
    f = compose(jet_collision_step_to(table, hs.points[k], order_g, to.obstacle, to.s, step).map, f);
  }
  f = compose(shift(nf.conjugacy, d2.x, d2.y).truncated(order_g), f);
  f.x.value() = y2.x;
  f.y.value() = 0;
  const std::vector<Real>& a = nf.a;
  Real lj = pow(nf.lambda, j);
  JetMap pre = normal_form_power(a, -j, Real(0), y1.y / lj, order_g);
  JetMap post = normal_form_power(a, -j, y2.x, Real(0), order_g);
  JetMap g = compose(post, compose(f, pre));
  const Real xt1 = y1.y / lj, xt2 = g.x.value();
  g.y.value() = 0;

  // Arcs on the hyperbolas xi eta = t: Gamma1 near (0, xt1), its image Gamma2 near (xt2, 0).
  const int T = J + 1;
  Series t = Series::variable(T);
  Series e(T);
  Real c = xt2 * g.y.coeff(0, 1);
  require(c != 0, "gluing map does not cross the stable axis");
  Series xi1, g1, g2;
  for (int pass = 0; pass <= T + 1; ++pass) {
    xi1 = t * reciprocal(Series(T, xt1) + e);
    g1 = eval_jet(g.x, xi1, e);
    g2 = eval_jet(g.y, xi1, e);
    Series res = g1 * g2 - t;
    e -= res * (Real(1) / c);
  }
  xi1 = t * reciprocal(Series(T, xt1) + e);
  g1 = eval_jet(g.x, xi1, e);
  g2 = eval_jet(g.y, xi1, e);
  Series eta1 = Series(T, xt1) + e;
  Series d_sq = eta1 * reciprocal(g1);
  if (!(d_sq[0] > 0))
    fail(ErrorKind::degenerate,
         "anchor coordinates have opposite signs; the mirror frame needs xi1 xi2 > 0");
  Series dser = sqrt(d_sq);
  Series u = dser * xi1;
  Series v = eta1 * reciprocal(dser);
  Series gamma = compose(v, reversion(u));

  HomoclinicFrame fr;
  fr.deep_blocks = j;
  fr.correction = dser;
  fr.xi_inf = v[0];
  fr.xi_inf_sq = xt1 * xt2;
  fr.anchor_residual = std::max(Real(abs(y1.x / y1.y)), Real(abs(y2.y / y2.x)));
  fr.gamma.assign(J + 1, Real(0));
  for (int k = 0; k <= J; ++k) fr.gamma[k] = gamma[k];

  // Mirror-normalized gluing map N_D o G o N_D^-1.
  auto nd_jet = [&](const Real& xi0, const Real& eta0, bool inverse_map) {
    Jet2 xi = Jet2::variable(order_g, 0, xi0), eta = Jet2::variable(order_g, 1, eta0);
    Jet2 dz = apply_series(truncate(dser, order_g), xi * eta);
    if (inverse_map) return JetMap{xi * reciprocal(dz), eta * dz};
    return JetMap{xi * dz, eta * reciprocal(dz)};
  };
  JetMap gm = compose(nd_jet(xt2, Real(0), false), compose(g, nd_jet(Real(0), fr.xi_inf, true)));
  fr.gluing_derivative = gm.linear();
  const Mat2& dg = fr.gluing_derivative;
  fr.w1 = -dg.c / dg.d;

  Series us = Series::variable(J);
  Series arc = truncate(gamma, J);
  arc[0] = 0;
  Series gs = eval_jet(gm.y.derivative(1), us, arc);
  fr.g.assign(J + 1, Real(0));
  for (int k = 0; k <= J; ++k) fr.g[k] = gs[k];
  fr.frame_identity = fr.g[0] * (fr.gamma[1] - fr.w1) - 1;

  // DG along the arc against [[gp(2 - gp g), gp g - 1], [1 - gp g, g]].
  Series gp = truncate(gamma, J + 1).derivative();
  gp = truncate(gp, J);
  Series one(J, Real(1)), two(J, Real(2));
  Series gpg = gp * gs;
  Series m11 = eval_jet(gm.x.derivative(0), us, arc) - gp * (two - gpg);
  Series m12 = eval_jet(gm.x.derivative(1), us, arc) - (gpg - one);
  Series m21 = eval_jet(gm.y.derivative(0), us, arc) - (one - gpg);
  fr.structure_residual = 0;
  for (int k = 0; k < J; ++k)
    for (const Series* s : {&m11, &m12, &m21})
      fr.structure_residual = std::max(fr.structure_residual, Real(abs((*s)[k])));

  // Sampled swap test on small levels.
  fr.mirror_residual = 0;
  for (int k = -2; k <= 2; ++k) {
    Real tk = Real(k) * Real("1e-6") * fr.xi_inf_sq;
    Real dk = dser.evaluate(tk);
    Vec2 p1{u.evaluate(tk), v.evaluate(tk)};
    Vec2 p2{dk * g1.evaluate(tk), g2.evaluate(tk) / dk};
    fr.mirror_residual =
        std::max(fr.mirror_residual, size(Vec2{p2.x - p1.y, p2.y - p1.x}));
  }

  const int ka = nf.invariants();
  fr.a_bar.resize(ka + 1);
  for (int k = 0; k <= ka; ++k) fr.a_bar[k] = a[k] * pow(fr.xi_inf_sq, k) / nf.lambda;
  fr.gamma_bar.resize(J + 1);
  fr.g_bar.resize(J + 1);
  for (int k = 0; k <= J; ++k) {
    fr.gamma_bar[k] = fr.gamma[k] * pow(fr.xi_inf, k - 1);
    fr.g_bar[k] = fr.g[k] * pow(fr.xi_inf, k);
  }
  return fr;
}

}  // namespace rigidity
