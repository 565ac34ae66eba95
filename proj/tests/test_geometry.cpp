#include <doctest.h>

#include "rigidity/errors.hpp"
#include "rigidity/geometry.hpp"

#include <boost/math/special_functions/ellint_2.hpp>

#include <cmath>
#include <random>

using namespace rigidity;

namespace {

BilliardTable triangle_table(const char* side) {
  Real d = parse_real(side);
  Vec2 c1{Real(0), Real(0)}, c2{d, Real(0)}, c3{d / 2, d * sqrt(Real(3)) / 2};
  return BilliardTable::unchecked({ObstacleCurve::circle(c1, Real(1)),
                                   ObstacleCurve::circle(c2, Real(1)),
                                   ObstacleCurve::circle(c3, Real(1))});
}

ObstacleCurve wobbly() {
  return ObstacleCurve::fourier_circle({Real(0), Real(0)}, Real(1),
                                       {{2, Real("0.05"), Real(0)}, {3, Real("0.02"), Real("0.4")}});
}

}  // namespace

TEST_CASE("circle evaluation") {
  PrecisionScope scope(256);
  auto c = ObstacleCurve::circle({Real(0), Real(0)}, Real(1));
  auto d = c.eval(Real(0), 1);
  CHECK(abs(d[0].x - 1) < 1e-70);
  CHECK(abs(d[0].y) < 1e-70);
  CHECK(abs(d[1].x) < 1e-70);
  CHECK(abs(d[1].y - 1) < 1e-70);

  auto c2 = ObstacleCurve::circle({Real(3), Real(-1)}, Real(2));
  auto p = c2.eval(pi(), 0)[0];
  CHECK(abs(p.x - 3) < 1e-70);
  CHECK(abs(p.y - 1) < 1e-70);
  CHECK(abs(c2.curvature(Real("0.7")) - Real(1) / 2) < 1e-70);
}

TEST_CASE("fourier-circle tangent against finite differences") {
  PrecisionScope scope(256);
  ObstacleCurve c = ObstacleCurve::fourier_circle({Real(0), Real(0)}, Real(1),
                                                  {{2, Real("0.05"), Real(0)}});
  Real h("1e-6");
  auto d = c.eval(Real(0), 1);
  Vec2 plus = c.eval(h, 0)[0], minus = c.eval(-h, 0)[0];
  Vec2 fd{(plus.x - minus.x) / (2 * h), (plus.y - minus.y) / (2 * h)};
  CHECK(abs(fd.x - d[1].x) < 1e-10);
  CHECK(abs(fd.y - d[1].y) < 1e-10);
}

TEST_CASE("ellipse curvature at the end of the major axis") {
  PrecisionScope scope(256);
  auto e = ObstacleCurve::ellipse({Real(0), Real(0)}, Real(2), Real(1), Real(0));
  // s = 0 sits at t = 0, the point (a, 0).
  auto p = e.eval(Real(0), 0)[0];
  CHECK(abs(p.x - 2) < 1e-60);
  Real kappa = e.curvature(Real(0));
  CHECK(abs(kappa - 2) < 1e-50);
  // Oracle: finite difference of the tangent angle.
  Real h("1e-8");
  auto tp = e.eval(h, 1)[1], tm = e.eval(-h, 1)[1];
  Real fd = (atan2(tp.y, tp.x) - atan2(tm.y, tm.x)) / (2 * h);
  CHECK(abs(fd - kappa) < 1e-6);
  // Perimeter against the complete elliptic integral.
  double ecc = std::sqrt(1 - 0.25);
  double exact = 4 * 2 * boost::math::ellint_2(ecc);
  CHECK(std::abs(to_double(e.perimeter()) - exact) < 1e-12);
}

TEST_CASE("non-convex fourier-circle is rejected") {
  PrecisionScope scope(128);
  CHECK_THROWS_AS(ObstacleCurve::fourier_circle({Real(0), Real(0)}, Real(1),
                                                {{2, Real("0.5"), Real(0)}}),
                  Error);
}

TEST_CASE("unit speed and curvature consistency at random parameters") {
  PrecisionScope scope(256);
  std::vector<ObstacleCurve> curves = {
      ObstacleCurve::circle({Real(1), Real(2)}, Real("1.5")),
      ObstacleCurve::ellipse({Real(0), Real(0)}, Real("1.3"), Real("0.9"), Real("0.3")), wobbly()};
  std::mt19937_64 rng(3);
  for (const auto& c : curves) {
    std::uniform_real_distribution<double> u(0, to_double(c.perimeter()));
    for (int i = 0; i < 100; ++i) {
      Real s = u(rng);
      auto d = c.eval(s, 2);
      CHECK(abs(norm(d[1]) - 1) < 1e-60);
      CHECK(abs(abs(cross(d[1], d[2])) - c.curvature(s)) < 1e-60);
      CHECK(c.curvature(s) > 0);
    }
  }
}

TEST_CASE("arclength Taylor series reproduces the curve") {
  PrecisionScope scope(256);
  for (const auto& c : {ObstacleCurve::ellipse({Real(0), Real(0)}, Real(2), Real(1), Real("0.2")), wobbly()}) {
    Real s("0.83"), u("1e-3");
    auto t = c.taylor(s, 12);
    Vec2 exact = c.point_at_param(c.param_at_arclength(s + u));
    CHECK(abs(t[0].evaluate(u) - exact.x) < 1e-36);
    CHECK(abs(t[1].evaluate(u) - exact.y) < 1e-36);
    // Round trip of the arclength map.
    Real back = c.arclength_at_param(c.param_at_arclength(s));
    CHECK(abs(back - s) < 1e-70);
  }
}

TEST_CASE("order above the ceiling is a capability error") {
  PrecisionScope scope(128);
  auto c = ObstacleCurve::circle({Real(0), Real(0)}, Real(1));
  try {
    c.eval(Real(0), kCurveOrderCeiling + 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capability);
  }
}

TEST_CASE("non-eclipse check on equilateral three-disk tables") {
  PrecisionScope scope(128);
  auto good = triangle_table("6");
  NonEclipseReport r = non_eclipse_check(good);
  CHECK(r.pass);
  // Closed form: distance from the third circle to the strip |y| <= 1 of the other two.
  double expected = 3 * std::sqrt(3.0) - 2;
  CHECK(std::abs(r.margin - expected) < 1e-3);

  auto tight = triangle_table("2.05");
  CHECK(clearance_check(tight).pass);
  NonEclipseReport bad = non_eclipse_check(tight);
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin < 0);
  CHECK(2.05 * std::sqrt(3.0) / 2 - 2 < 0);

  auto two = BilliardTable::unchecked({ObstacleCurve::circle({Real(0), Real(0)}, Real(1)),
                                       ObstacleCurve::circle({Real(4), Real(0)}, Real(1))});
  CHECK_THROWS_AS(non_eclipse_check(two), Error);
}

TEST_CASE("table config parsing") {
  PrecisionScope scope(256);
  auto t = parse_table(R"(
name = tri
[obstacle]
kind = circle
center = 0, 0
radius = 1
[obstacle]
kind = circle
center = 6, 0
radius = 1
[obstacle]
kind = circle
center = 3, 3*sqrt(3)
radius = 1
)");
  CHECK(t.size() == 3);
  CHECK(t.name() == "tri");
  CHECK(abs(t[2].center().y - 3 * sqrt(Real(3))) < 1e-70);
  CHECK(t.non_eclipse_margin() > 3);
  CHECK_THROWS_AS(parse_table("[obstacle]\nkind = circle\ncenter = 0,0\nradius = 1\n"), Error);
}
