#include "rigidity/geometry.hpp"

#include "rigidity/config.hpp"
#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace rigidity {

namespace {

using P2 = std::array<double, 2>;

double cross2(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
P2 sub(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
double len(const P2& a) { return std::hypot(a[0], a[1]); }

}  // namespace

ObstacleCurve ObstacleCurve::circle(const Vec2& center, const Real& r) {
  require(r > 0, "circle radius must be positive");
  ObstacleCurve c;
  c.kind_ = CurveKind::circle;
  c.center_ = center;
  c.radius = r;
  c.build_arclength();
  c.coarse_samples_ = c.samples(64);
  c.bounding_radius_ = to_double(r);
  c.max_curvature_ = 1 / to_double(r);
  return c;
}

ObstacleCurve ObstacleCurve::ellipse(const Vec2& center, const Real& a, const Real& b,
                                     const Real& rotation) {
  require(b > 0 && a >= b, "ellipse needs semi-axes a >= b > 0");
  ObstacleCurve c;
  c.kind_ = CurveKind::ellipse;
  c.center_ = center;
  c.semi_a = a;
  c.semi_b = b;
  c.rotation = rotation;
  c.build_arclength();
  c.coarse_samples_ = c.samples(64);
  c.bounding_radius_ = to_double(a);
  c.max_curvature_ = to_double(a / (b * b));
  return c;
}

ObstacleCurve ObstacleCurve::fourier_circle(const Vec2& center, const Real& r,
                                            std::vector<FourierMode> modes,
                                            const CurveOptions& options) {
  require(r > 0, "fourier-circle base radius must be positive");
  double bound = 1;
  for (const auto& m : modes) {
    require(m.k >= 2, "fourier-circle modes start at k = 2");
    bound += std::abs(to_double(m.eps));
  }
  // Polar curvature on a dense grid.
  double rr = to_double(r);
  double kmax = 0;
  for (int i = 0; i < options.curvature_grid; ++i) {
    double t = 2 * M_PI * i / options.curvature_grid;
    double f = 1, f1 = 0, f2 = 0;
    for (const auto& m : modes) {
      double e = to_double(m.eps), ph = to_double(m.phase), arg = m.k * t - ph;
      f += e * std::cos(arg);
      f1 -= e * m.k * std::sin(arg);
      f2 -= e * m.k * m.k * std::cos(arg);
    }
    if (f <= 0) fail(ErrorKind::validation, "fourier-circle radius function is not positive");
    double kappa = (f * f + 2 * f1 * f1 - f * f2) / std::pow(f * f + f1 * f1, 1.5) / rr;
    if (kappa * rr <= options.curvature_margin) {
      std::ostringstream os;
      os << "fourier-circle is not strictly convex: curvature " << kappa << " at t=" << t;
      fail(ErrorKind::validation, os.str());
    }
    kmax = std::max(kmax, kappa);
  }
  ObstacleCurve c;
  c.kind_ = CurveKind::fourier_circle;
  c.center_ = center;
  c.radius = r;
  c.modes = std::move(modes);
  c.build_arclength();
  c.coarse_samples_ = c.samples(64);
  c.bounding_radius_ = rr * bound;
  c.max_curvature_ = kmax;
  return c;
}

std::string ObstacleCurve::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  switch (kind_) {
    case CurveKind::circle:
      os << "circle center=(" << to_double(center_.x) << ", " << to_double(center_.y)
         << ") radius=" << to_double(radius);
      break;
    case CurveKind::ellipse:
      os << "ellipse center=(" << to_double(center_.x) << ", " << to_double(center_.y)
         << ") a=" << to_double(semi_a) << " b=" << to_double(semi_b)
         << " rotation=" << to_double(rotation);
      break;
    case CurveKind::fourier_circle:
      os << "fourier-circle center=(" << to_double(center_.x) << ", " << to_double(center_.y)
         << ") radius=" << to_double(radius);
      for (const auto& m : modes)
        os << " mode(" << m.k << ", " << to_double(m.eps) << ", " << to_double(m.phase) << ")";
      break;
  }
  return os.str();
}

std::array<Series, 2> ObstacleCurve::param_taylor(const Real& t, int order) const {
  switch (kind_) {
    case CurveKind::circle: {
      Series x = cos_series(t, order) * radius, y = sin_series(t, order) * radius;
      x[0] += center_.x;
      y[0] += center_.y;
      return {x, y};
    }
    case CurveKind::ellipse: {
      Series c = cos_series(t, order), s = sin_series(t, order);
      Real ca = cos(rotation), sa = sin(rotation);
      Series x = c * (semi_a * ca) - s * (semi_b * sa);
      Series y = c * (semi_a * sa) + s * (semi_b * ca);
      x[0] += center_.x;
      y[0] += center_.y;
      return {x, y};
    }
    case CurveKind::fourier_circle: {
      Series f(order, Real(1));
      for (const auto& m : modes) {
        Series cm = cos_series(m.k * t - m.phase, order);
        Real kp = 1;
        for (int j = 0; j <= order; ++j) {
          f[j] += m.eps * cm[j] * kp;
          kp *= m.k;
        }
      }
      f *= radius;
      Series x = f * cos_series(t, order), y = f * sin_series(t, order);
      x[0] += center_.x;
      y[0] += center_.y;
      return {x, y};
    }
  }
  fail(ErrorKind::internal, "unknown curve kind");
}

Vec2 ObstacleCurve::point_at_param(const Real& t) const {
  auto p = param_taylor(t, 0);
  return {p[0][0], p[1][0]};
}

Vec2 ObstacleCurve::velocity_at_param(const Real& t) const {
  auto p = param_taylor(t, 1);
  return {p[0][1], p[1][1]};
}

Real ObstacleCurve::speed_at_param(const Real& t) const { return norm(velocity_at_param(t)); }

void ObstacleCurve::build_arclength() {
  if (kind_ == CurveKind::circle) {
    c0_ = radius;
    perimeter_ = 2 * rigidity::pi() * radius;
    return;
  }
  const Real two_pi = 2 * rigidity::pi();
  for (int n = 64; n <= 16384; n *= 2) {
    std::vector<Real> cs(n), sn(n), speed(n);
    for (int j = 0; j < n; ++j) {
      Real t = two_pi * j / n;
      cs[j] = cos(t);
      sn[j] = sin(t);
      speed[j] = speed_at_param(t);
    }
    const int kmax = n / 2 - 1;
    Real mean = 0;
    for (const auto& v : speed) mean += v;
    mean /= n;
    std::vector<Real> a(kmax + 1, Real(0)), b(kmax + 1, Real(0));
    for (int k = 1; k <= kmax; ++k) {
      Real sa = 0, sb = 0, tmp;
      int idx = 0;
      for (int j = 0; j < n; ++j) {
        mpfr_mul(tmp.backend().data(), speed[j].backend().data(), cs[idx].backend().data(), MPFR_RNDN);
        mpfr_add(sa.backend().data(), sa.backend().data(), tmp.backend().data(), MPFR_RNDN);
        mpfr_mul(tmp.backend().data(), speed[j].backend().data(), sn[idx].backend().data(), MPFR_RNDN);
        mpfr_add(sb.backend().data(), sb.backend().data(), tmp.backend().data(), MPFR_RNDN);
        idx += k;
        if (idx >= n) idx -= n;
      }
      a[k] = 2 * sa / n;
      b[k] = 2 * sb / n;
    }
    Real tail = 0;
    for (int k = n / 4; k <= kmax; ++k) tail = std::max(tail, std::max(abs(a[k]), abs(b[k])));
    if (tail < 16 * mean * epsilon()) {
      // Keep the significant harmonics and their common step.
      Real cut = 64 * mean * epsilon();
      int last = 0, step = 0;
      for (int k = 1; k <= kmax; ++k)
        if (abs(a[k]) > cut || abs(b[k]) > cut) {
          last = k;
          step = std::gcd(step, k);
        }
      if (step == 0) step = 1;
      c0_ = mean;
      c0d_ = to_double(mean);
      harmonic_step_ = step;
      sa_.assign(last / step + 1, Real(0));
      sb_.assign(last / step + 1, Real(0));
      for (int m = 1; m * step <= last; ++m) {
        sa_[m] = a[m * step] / (m * step);
        sb_[m] = b[m * step] / (m * step);
      }
      sad_.resize(sa_.size());
      sbd_.resize(sb_.size());
      for (std::size_t m = 0; m < sa_.size(); ++m) {
        sad_[m] = to_double(sa_[m]);
        sbd_[m] = to_double(sb_[m]);
      }
      perimeter_ = two_pi * mean;
      return;
    }
  }
  fail(ErrorKind::nonconvergence, "arclength Fourier series did not converge: " + describe());
}

Real ObstacleCurve::arclength_at_param(const Real& t) const {
  if (kind_ == CurveKind::circle) return radius * t;
  const Real two_pi = 2 * rigidity::pi();
  Real turns = floor(t / two_pi);
  Real tr = t - turns * two_pi;
  Real s = c0_ * tr;
  Real c1 = cos(harmonic_step_ * tr), s1 = sin(harmonic_step_ * tr);
  Real ck = c1, sk = s1, cprev = 1, sprev = 0;
  for (std::size_t m = 1; m < sa_.size(); ++m) {
    s += sa_[m] * sk + sb_[m] * (1 - ck);
    Real cn = 2 * c1 * ck - cprev, sn = 2 * c1 * sk - sprev;
    cprev = ck;
    sprev = sk;
    ck = cn;
    sk = sn;
  }
  return s + turns * perimeter_;
}

double ObstacleCurve::arclength_double(double t, double* speed) const {
  double s = c0d_ * t, v = c0d_;
  for (std::size_t m = 1; m < sad_.size(); ++m) {
    double k = static_cast<double>(m * harmonic_step_);
    double c = std::cos(k * t), sn = std::sin(k * t);
    s += sad_[m] * sn + sbd_[m] * (1 - c);
    v += k * (sad_[m] * c + sbd_[m] * sn);
  }
  *speed = v;
  return s;
}

Real ObstacleCurve::param_at_arclength(const Real& s) const {
  if (kind_ == CurveKind::circle) return s / radius;
  Real sw = wrap(s, perimeter_);
  double swd = to_double(sw);
  double td = 2 * M_PI * swd / to_double(perimeter_);
  for (int it = 0; it < 30; ++it) {
    double v = 0;
    double f = arclength_double(td, &v) - swd;
    double step = f / v;
    td -= step;
    if (std::abs(step) < 1e-15) break;
  }
  Real t = td;
  Real tol = ldexp(Real(1), 16 - precision_bits());
  for (int it = 0; it < 100; ++it) {
    Real step = (arclength_at_param(t) - sw) / speed_at_param(t);
    t -= step;
    if (abs(step) < tol) return t;
  }
  fail(ErrorKind::nonconvergence, "arclength inversion failed: " + describe());
}

std::array<Series, 2> ObstacleCurve::taylor(const Real& s, int order) const {
  if (order > kCurveOrderCeiling)
    fail(ErrorKind::capability, "curve derivative order " + std::to_string(order) +
                                    " above ceiling " + std::to_string(kCurveOrderCeiling));
  if (kind_ == CurveKind::circle) {
    auto p = param_taylor(s / radius, order);
    Real f = 1;
    for (int j = 1; j <= order; ++j) {
      f /= radius;
      p[0][j] *= f;
      p[1][j] *= f;
    }
    return p;
  }
  Real t = param_at_arclength(s);
  auto p = param_taylor(t, order);
  if (order == 0) return p;
  Series dx = p[0].derivative(), dy = p[1].derivative();
  Series speed = sqrt(dx * dx + dy * dy);
  Series arc = speed.integral();
  Series v = reversion(arc);
  std::array<Series, 2> out;
  for (int c = 0; c < 2; ++c) {
    Series shifted = p[c];
    Real base = shifted[0];
    shifted[0] = 0;
    out[c] = compose(shifted, v);
    out[c][0] = base;
  }
  return out;
}

std::vector<Vec2> ObstacleCurve::eval(const Real& s, int order) const {
  auto p = taylor(s, order);
  std::vector<Vec2> d(order + 1);
  Real f = 1;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) f *= j;
    d[j] = {p[0][j] * f, p[1][j] * f};
  }
  return d;
}

Real ObstacleCurve::curvature(const Real& s) const {
  auto d = eval(s, 2);
  return cross(d[1], d[2]);
}

std::vector<std::array<double, 2>> ObstacleCurve::samples(int count) const {
  if (count == static_cast<int>(coarse_samples_.size())) return coarse_samples_;
  std::vector<P2> out(count);
  const Real two_pi = 2 * rigidity::pi();
  for (int j = 0; j < count; ++j) {
    Vec2 p = point_at_param(two_pi * j / count);
    out[j] = {to_double(p.x), to_double(p.y)};
  }
  return out;
}

BilliardTable BilliardTable::unchecked(std::vector<ObstacleCurve> obstacles, std::string name) {
  BilliardTable t;
  t.obstacles_ = std::move(obstacles);
  t.name_ = std::move(name);
  return t;
}

BilliardTable BilliardTable::create(std::vector<ObstacleCurve> obstacles, std::string name,
                                    const TableOptions& options) {
  BilliardTable t = unchecked(std::move(obstacles), std::move(name));
  require(t.size() >= 3, "a table needs at least 3 obstacles");
  ClearanceReport c = clearance_check(t, options);
  if (!c.pass) {
    std::ostringstream os;
    os << "obstacles " << c.witness[0] + 1 << " and " << c.witness[1] + 1
       << " are not disjoint with positive clearance (clearance " << c.clearance << ")";
    fail(ErrorKind::validation, os.str());
  }
  NonEclipseReport r = non_eclipse_check(t, options);
  if (!r.pass) fail(ErrorKind::validation, "non-eclipse condition fails: " + r.message);
  t.non_eclipse_margin_ = r.margin;
  return t;
}

Real BilliardTable::total_perimeter() const {
  Real s = 0;
  for (const auto& o : obstacles_) s += o.perimeter();
  return s;
}

BilliardTable BilliardTable::scaled(const Real& c) const {
  std::vector<ObstacleCurve> out;
  for (const auto& o : obstacles_) {
    Vec2 ctr = c * o.center();
    switch (o.kind()) {
      case CurveKind::circle: out.push_back(ObstacleCurve::circle(ctr, c * o.radius)); break;
      case CurveKind::ellipse:
        out.push_back(ObstacleCurve::ellipse(ctr, c * o.semi_a, c * o.semi_b, o.rotation));
        break;
      case CurveKind::fourier_circle:
        out.push_back(ObstacleCurve::fourier_circle(ctr, c * o.radius, o.modes));
        break;
    }
  }
  BilliardTable t = unchecked(std::move(out), name_ + "-scaled");
  t.non_eclipse_margin_ = non_eclipse_margin_ * to_double(c);
  return t;
}

namespace {

// Convex polygon helpers; vertices counterclockwise.
bool inside_convex(const std::vector<P2>& poly, const P2& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    if (cross2(sub(b, a), sub(p, a)) < 0) return false;
  }
  return true;
}

double segment_distance(const P2& p, const P2& a, const P2& b) {
  P2 ab = sub(b, a), ap = sub(p, a);
  double l2 = ab[0] * ab[0] + ab[1] * ab[1];
  double t = l2 > 0 ? std::clamp((ap[0] * ab[0] + ap[1] * ab[1]) / l2, 0.0, 1.0) : 0.0;
  P2 q{a[0] + t * ab[0], a[1] + t * ab[1]};
  return len(sub(p, q));
}

double boundary_distance(const std::vector<P2>& poly, const P2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

std::vector<P2> convex_hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(sub(h[k - 1], h[k - 2]), sub(pts[i], h[k - 2])) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(sub(h[k - 1], h[k - 2]), sub(pts[i], h[k - 2])) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Largest gap between a sampled convex curve and its inscribed polygon.
double sagitta(const std::vector<P2>& poly, double max_curvature) {
  double chord = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    chord = std::max(chord, len(sub(poly[(i + 1) % poly.size()], poly[i])));
  return chord * chord * max_curvature / 8 * 1.01;
}

// Signed gap between two sampled convex obstacles (negative if they overlap).
double polygon_gap(const std::vector<P2>& a, const std::vector<P2>& b) {
  double depth = 0;
  bool overlap = false;
  for (const auto& p : a)
    if (inside_convex(b, p)) {
      overlap = true;
      depth = std::max(depth, boundary_distance(b, p));
    }
  for (const auto& p : b)
    if (inside_convex(a, p)) {
      overlap = true;
      depth = std::max(depth, boundary_distance(a, p));
    }
  if (overlap) return -depth;
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : a) d = std::min(d, boundary_distance(b, p));
  for (const auto& p : b) d = std::min(d, boundary_distance(a, p));
  return d;
}

struct TangentPoints {
  Real ti, tj;
};

// Common outer tangent of obstacles ci, cj supporting both in the direction `normal`.
TangentPoints outer_tangent(const ObstacleCurve& ci, const ObstacleCurve& cj, const P2& normal,
                            int i, int j) {
  const int n = 256;
  auto best_param = [&](const ObstacleCurve& c) {
    auto s = c.samples(n);
    int arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      double v = s[k][0] * normal[0] + s[k][1] * normal[1];
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    return 2 * rigidity::pi() * arg / n;
  };
  Real ti = best_param(ci), tj = best_param(cj);
  for (int it = 0; it < 80; ++it) {
    auto a = ci.param_taylor(ti, 2);
    auto b = cj.param_taylor(tj, 2);
    Vec2 p{a[0][0], a[1][0]}, q{b[0][0], b[1][0]};
    Vec2 dp{a[0][1], a[1][1]}, dq{b[0][1], b[1][1]};
    Vec2 ddp{2 * a[0][2], 2 * a[1][2]}, ddq{2 * b[0][2], 2 * b[1][2]};
    Vec2 w = q - p;
    Real f1 = cross(dp, w), f2 = cross(dq, w);
    Mat2 jac{cross(ddp, w), cross(dp, dq), -cross(dq, dp), cross(ddq, w)};
    Vec2 step = jac.inverse() * Vec2{f1, f2};
    ti -= step.x;
    tj -= step.y;
    if (abs(step.x) + abs(step.y) < 1e-13) {
      // Both obstacles must lie on the same side of the line.
      Real nl = norm(w);
      Vec2 nrm{-w.y / nl, w.x / nl};
      double side = to_double(dot(nrm, Vec2{Real(normal[0]), Real(normal[1])})) >= 0 ? 1.0 : -1.0;
      double worst = 0;
      for (const auto* c : {&ci, &cj})
        for (const auto& s : c->samples(n)) {
          double v = side * (to_double(nrm.x) * (s[0] - to_double(p.x)) +
                             to_double(nrm.y) * (s[1] - to_double(p.y)));
          worst = std::max(worst, v);
        }
      if (worst > 1e-9 * (1 + to_double(nl)))
        fail(ErrorKind::nonconvergence, "outer tangent solver for obstacles " +
                                            std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                            " converged to a separating tangent");
      return {ti, tj};
    }
  }
  fail(ErrorKind::nonconvergence, "outer tangent solver did not converge for obstacles " +
                                      std::to_string(i + 1) + ", " + std::to_string(j + 1));
}

}  // namespace

ClearanceReport clearance_check(const BilliardTable& table, const TableOptions& options) {
  ClearanceReport r;
  r.clearance = std::numeric_limits<double>::infinity();
  const int m = table.size();
  std::vector<std::vector<P2>> poly(m);
  std::vector<double> sag(m);
  for (int i = 0; i < m; ++i) {
    poly[i] = table[i].samples(options.samples_per_obstacle);
    sag[i] = sagitta(poly[i], table[i].max_curvature_estimate());
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double g = polygon_gap(poly[i], poly[j]) - sag[i] - sag[j];
      if (g < r.clearance) {
        r.clearance = g;
        r.witness = {i, j};
      }
    }
  r.pass = r.clearance > options.required_margin;
  return r;
}

NonEclipseReport non_eclipse_check(const BilliardTable& table, const TableOptions& options) {
  const int m = table.size();
  require(m >= 3, "non-eclipse check needs at least 3 obstacles");
  NonEclipseReport r;
  r.margin = std::numeric_limits<double>::infinity();
  std::vector<std::vector<P2>> poly(m);
  std::vector<double> sag(m);
  for (int i = 0; i < m; ++i) {
    poly[i] = table[i].samples(options.samples_per_obstacle);
    sag[i] = sagitta(poly[i], table[i].max_curvature_estimate());
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      P2 ci{to_double(table[i].center().x), to_double(table[i].center().y)};
      P2 cj{to_double(table[j].center().x), to_double(table[j].center().y)};
      P2 d = sub(cj, ci);
      double dl = len(d);
      P2 nrm{-d[1] / dl, d[0] / dl};
      std::vector<P2> pts = poly[i];
      pts.insert(pts.end(), poly[j].begin(), poly[j].end());
      for (double sgn : {1.0, -1.0}) {
        TangentPoints tp = outer_tangent(table[i], table[j], {sgn * nrm[0], sgn * nrm[1]}, i, j);
        Vec2 a = table[i].point_at_param(tp.ti), b = table[j].point_at_param(tp.tj);
        pts.push_back({to_double(a.x), to_double(a.y)});
        pts.push_back({to_double(b.x), to_double(b.y)});
      }
      std::vector<P2> hull = convex_hull(pts);
      for (int k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        double gap = polygon_gap(hull, poly[k]) - sag[k] - std::max(sag[i], sag[j]);
        if (gap < r.margin) {
          r.margin = gap;
          r.witness = {i, j, k};
        }
      }
    }
  r.pass = r.margin > options.required_margin;
  std::ostringstream os;
  os << "obstacle " << r.witness[2] + 1 << " vs hull of obstacles " << r.witness[0] + 1 << ", "
     << r.witness[1] + 1 << ": margin " << r.margin;
  r.message = os.str();
  return r;
}

ObstacleCurve parse_obstacle(const ConfigSection& sec) {
  std::string kind = sec.require("kind");
  auto center = eval_list(sec.require("center"));
  require(center.size() == 2, "obstacle center needs two coordinates (line " +
                                  std::to_string(sec.line) + ")");
  Vec2 c{center[0], center[1]};
  if (kind == "circle") return ObstacleCurve::circle(c, eval_expression(sec.require("radius")));
  if (kind == "ellipse") {
    auto ab = eval_list(sec.require("semi_axes"));
    require(ab.size() == 2, "ellipse semi_axes needs two values");
    return ObstacleCurve::ellipse(c, ab[0], ab[1], eval_expression(sec.get("rotation", "0")));
  }
  if (kind == "fourier-circle") {
    std::vector<FourierMode> modes;
    for (const auto* e : sec.find_all("mode")) {
      auto v = eval_list(e->value);
      require(v.size() == 3, "fourier mode needs k, eps, phase (line " + std::to_string(e->line) + ")");
      modes.push_back({v[0].convert_to<int>(), v[1], v[2]});
    }
    return ObstacleCurve::fourier_circle(c, eval_expression(sec.require("radius")), modes);
  }
  fail(ErrorKind::validation, "unknown obstacle kind '" + kind + "'");
}

namespace {
BilliardTable table_from_config(const ConfigFile& cfg, const std::string& fallback_name,
                                TableOptions options) {
  std::vector<ObstacleCurve> obs;
  for (const auto* s : cfg.named("obstacle")) obs.push_back(parse_obstacle(*s));
  std::string name = cfg.sections.front().get("name", fallback_name);
  if (const auto* v = cfg.first("validation")) {
    options.samples_per_obstacle = std::stoi(v->get("samples", std::to_string(options.samples_per_obstacle)));
    options.required_margin = std::stod(v->get("margin", std::to_string(options.required_margin)));
  }
  return BilliardTable::create(std::move(obs), name, options);
}
}  // namespace

BilliardTable load_table(const std::string& path, const TableOptions& options) {
  ConfigFile cfg = load_config(path);
  std::string stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return table_from_config(cfg, stem, options);
}

BilliardTable parse_table(const std::string& text, const std::string& name,
                          const TableOptions& options) {
  return table_from_config(parse_config_text(text, name), name, options);
}

}  // namespace rigidity
