#include <doctest.h>

#include "rigidity/billiard.hpp"
#include "support.hpp"

using namespace rigidity;
using namespace testing_support;

namespace {

BilliardTable collinear_pair() {
  return BilliardTable::unchecked({ObstacleCurve::circle({Real(0), Real(0)}, Real(1)),
                                   ObstacleCurve::circle({Real(4), Real(0)}, Real(1))});
}

PhasePoint shifted(const PhasePoint& x, const Real& ds, const Real& dphi) {
  return {x.obstacle, x.s + ds, x.phi + dphi};
}

Vec2 image(const BilliardTable& t, const PhasePoint& x, const StepResult& ref) {
  StepResult r = billiard_step(t, x);
  REQUIRE(r.next.obstacle == ref.next.obstacle);
  Real per = t[r.next.obstacle].perimeter();
  return {ref.next.s + wrap_centered(r.next.s - ref.next.s, per), r.next.phi};
}

}  // namespace

TEST_CASE("head-on bounce between two circles") {
  PrecisionScope scope(256);
  auto t = collinear_pair();
  PhasePoint x{0, Real(0), Real(0)};
  StepResult r = billiard_step(t, x);
  CHECK(r.next.obstacle == 1);
  CHECK(abs(r.flight - 2) < 1e-70);
  CHECK(abs(r.next.phi) < 1e-70);
  Vec2 p = position(t, r.next);
  CHECK(abs(p.x - 3) < 1e-70);
  CHECK(abs(p.y) < 1e-70);
  Mat2 d = billiard_derivative(t, x);
  CHECK(abs(d.det() - 1) < 1e-70);
}

TEST_CASE("bouncing segment on the symmetric three-disk table") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks.cfg"));
  PhasePoint a{0, Real(0), Real(0)};
  StepResult r = billiard_step(t, a);
  CHECK(r.next.obstacle == 1);
  CHECK(abs(r.flight - 4) < 1e-70);
  CHECK(abs(r.next.s - pi()) < 1e-70);
  CHECK(abs(r.next.phi) < 1e-70);
  StepResult back = billiard_step(t, r.next);
  CHECK(back.next.obstacle == 0);
  CHECK(abs(wrap_centered(back.next.s, t[0].perimeter())) < 1e-70);
  CHECK(abs(back.flight - 4) < 1e-70);
}

TEST_CASE("escape through the open side") {
  PrecisionScope scope(128);
  auto t = load_table(config_path("three-disks.cfg"));
  PhasePoint x{0, pi(), Real(0)};  // pointing away from the other disks
  try {
    billiard_step(t, x);
    FAIL("expected escape");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::escape);
  }
}

TEST_CASE("area form: det DF = cos(phi) / cos(phi')") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(1);
  for (const auto& name : bundled_tables()) {
    auto t = load_table(config_path(name));
    Real worst = 0;
    for (const auto& x : random_hitting_points(t, rng, 60)) {
      CollisionJet j = jet_collision_step(t, x, 1);
      Real expected = cos(x.phi) / cos(j.step.next.phi);
      worst = std::max(worst, Real(abs(j.map.linear().det() - expected)));
    }
    CHECK(worst < 1e-60);
  }
}

TEST_CASE("jet derivatives against finite differences") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(2);
  for (const auto& name : bundled_tables()) {
    auto t = load_table(config_path(name));
    for (const auto& x : random_hitting_points(t, rng, 8)) {
      CollisionJet j = jet_collision_step(t, x, 2);
      Mat2 d = j.map.linear();
      Real h("1e-6");
      Vec2 sp = image(t, shifted(x, h, 0), j.step), sm = image(t, shifted(x, -h, 0), j.step);
      Vec2 pp = image(t, shifted(x, 0, h), j.step), pm = image(t, shifted(x, 0, -h), j.step);
      CHECK(abs((sp.x - sm.x) / (2 * h) - d.a) < 1e-7);
      CHECK(abs((sp.y - sm.y) / (2 * h) - d.c) < 1e-7);
      CHECK(abs((pp.x - pm.x) / (2 * h) - d.b) < 1e-7);
      CHECK(abs((pp.y - pm.y) / (2 * h) - d.d) < 1e-7);

      // Second order: f(x+h) - 2 f(x) + f(x-h) = 2 c_20 h^2.
      Real h2("1e-9");
      Vec2 base{j.step.next.s, j.step.next.phi};
      Vec2 a = image(t, shifted(x, h2, 0), j.step), b = image(t, shifted(x, -h2, 0), j.step);
      Real c20 = (a.x - 2 * base.x + b.x) / (2 * h2 * h2);
      CHECK(abs(c20 - j.map.x.coeff(2, 0)) < 1e-5 * (1 + abs(c20)));
      Vec2 e = image(t, shifted(x, 0, h2), j.step), f = image(t, shifted(x, 0, -h2), j.step);
      Real d02 = (e.y - 2 * base.y + f.y) / (2 * h2 * h2);
      CHECK(abs(d02 - j.map.y.coeff(0, 2)) < 1e-5 * (1 + abs(d02)));
      // Mixed: [f(+,+) - f(+,-) - f(-,+) + f(-,-)] / (4 h^2) = c_11.
      Vec2 q1 = image(t, shifted(x, h2, h2), j.step), q2 = image(t, shifted(x, h2, -h2), j.step);
      Vec2 q3 = image(t, shifted(x, -h2, h2), j.step), q4 = image(t, shifted(x, -h2, -h2), j.step);
      Real c11 = (q1.x - q2.x - q3.x + q4.x) / (4 * h2 * h2);
      CHECK(abs(c11 - j.map.x.coeff(1, 1)) < 1e-5 * (1 + abs(c11)));
    }
  }
}

TEST_CASE("jet evaluated at zero reproduces the step, higher orders agree") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(4);
  auto t = load_table(config_path("mixed.cfg"));
  for (const auto& x : random_hitting_points(t, rng, 4)) {
    CollisionJet j6 = jet_collision_step(t, x, 6);
    CollisionJet j1 = jet_collision_step(t, x, 1);
    CHECK(abs(j6.map.x.value() - j6.step.next.s) < 1e-70);
    CHECK(abs(j6.map.y.value() - j6.step.next.phi) < 1e-70);
    CHECK((j6.map.truncated(1) - j1.map).max_abs() < 1e-60);
    // Jet prediction at a small displacement vs the true map.
    Real d1("1e-6"), d2("-2e-6");
    Vec2 pred = j6.map.evaluate(d1, d2);
    Vec2 truth = image(t, shifted(x, d1, d2), j6.step);
    CHECK(abs(pred.x - truth.x) < 1e-30);
    CHECK(abs(pred.y - truth.y) < 1e-30);
  }
}

TEST_CASE("time reversal retraces 10-step orbits") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto t = load_table(config_path("three-disks-asym.cfg"));
  // Start next to the head-on bounce along the line of centres of obstacles 1 and 2 so that
  // the orbit survives ten collisions.
  Vec2 d = t[1].center() - t[0].center();
  Real s0 = wrap(atan2(d.y, d.x), 2 * pi());
  for (int trial = 0; trial < 5; ++trial) {
    PhasePoint x0{0, s0 + Real(u(rng) * 1e-12), Real(u(rng) * 1e-12)};
    std::vector<PhasePoint> path{x0};
    for (int k = 0; k < 10; ++k) path.push_back(billiard_step(t, path.back()).next);
    for (int k = 10; k > 0; --k) {
      PhasePoint rev{path[k].obstacle, path[k].s, -path[k].phi};
      PhasePoint back = billiard_step(t, rev).next;
      CHECK(back.obstacle == path[k - 1].obstacle);
      CHECK(abs(wrap_centered(back.s - path[k - 1].s, t[back.obstacle].perimeter())) < 1e-50);
      CHECK(abs(back.phi + path[k - 1].phi) < 1e-50);
    }
  }
}

TEST_CASE("jet order above the ceiling") {
  PrecisionScope scope(128);
  auto t = load_table(config_path("three-disks.cfg"));
  PhasePoint x{0, Real(0), Real(0)};
  CHECK_THROWS_AS(jet_collision_step(t, x, 9), Error);
}
