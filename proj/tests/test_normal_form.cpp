#include <doctest.h>

#include "rigidity/normal_form.hpp"
#include "support.hpp"

using namespace rigidity;
using namespace testing_support;

namespace {

JetMap conjugated(const JetMap& r0, const JetMap& n) {
  return compose(r0, compose(n, inverse(r0)));
}

}  // namespace

TEST_CASE("linear saddle has no invariants") {
  PrecisionScope scope(256);
  Real lam("0.3");
  JetMap g = JetMap::linear_map(7, Mat2{lam, Real(0), Real(0), 1 / lam});
  NormalForm nf = extract_birkhoff(g, 3);
  CHECK(abs(nf.lambda - lam) < 1e-70);
  for (int k = 1; k <= 3; ++k) CHECK(abs(nf.a[k]) < 1e-70);
  CHECK(nf.residual < 1e-70);
  CHECK(abs(anosov_cocycle_value(nf)) < 1e-70);
}

TEST_CASE("construct then recover") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(11);
  std::vector<Real> a{Real("0.5"), Real("1.0")};
  JetMap n = normal_form_map(a, 7);
  JetMap g = conjugated(random_symplectic_jet(rng, 7), n);
  g.x.value() = 0;
  g.y.value() = 0;
  NormalForm nf = extract_birkhoff(g, 3);
  CHECK(abs(nf.a[0] - Real("0.5")) < 1e-25);
  CHECK(abs(nf.a[1] - 1) < 1e-25);
  CHECK(abs(nf.a[2]) < 1e-25);
  CHECK(abs(nf.a[3]) < 1e-25);
  CHECK(nf.residual < 1e-30);
  // xi^2 eta in the first component is a1; xi eta^2 in the second is -a1 / lambda^2.
  CHECK(abs(nf.normalized.x.coeff(2, 1) - 1) < 1e-25);
  CHECK(abs(nf.normalized.y.coeff(1, 2) + 4) < 1e-25);
  // conjugacy is volume preserving at the base point
  CHECK(abs(nf.conjugacy.linear().det() - 1) < 1e-60);
}

TEST_CASE("invariants survive random area-preserving coordinate changes") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(5);
  std::vector<Real> a{Real("0.2"), Real("0.7"), Real("-1.3"), Real("0.4")};
  JetMap n = normal_form_map(a, 7);
  for (int trial = 0; trial < 10; ++trial) {
    JetMap g = conjugated(random_symplectic_jet(rng, 7), n);
    NormalForm nf = extract_birkhoff(g, 3);
    CAPTURE(trial);
    for (int k = 0; k <= 3; ++k) CHECK(abs(nf.a[k] - a[k]) < 1e-20);
    CHECK(nf.residual < 1e-30);
    // resonant antisymmetry: second component equals eta / Delta(xi eta) coefficientwise
    JetMap expect = normal_form_map(nf.a, 7);
    for (int k = 0; k <= 3; ++k)
      CHECK(abs(nf.normalized.y.coeff(k, k + 1) - expect.y.coeff(k, k + 1)) < 1e-25);
  }
}

TEST_CASE("extraction preconditions") {
  PrecisionScope scope(128);
  JetMap rot = JetMap::linear_map(7, Mat2{Real("0.6"), Real("-0.8"), Real("0.8"), Real("0.6")});
  CHECK_THROWS_AS(extract_birkhoff(rot, 3), Error);
  JetMap low = JetMap::linear_map(4, Mat2{Real(2), Real(0), Real(0), Real("0.5")});
  CHECK_THROWS_AS(extract_birkhoff(low, 2), Error);
}

TEST_CASE("Anosov cocycle closed values") {
  PrecisionScope scope(128);
  NormalForm nf;
  nf.lambda = Real("0.5");
  nf.a = {Real("0.5"), Real(1)};
  CHECK(abs(anosov_cocycle_value(nf) + 2) < 1e-35);
  nf.a[1] = 0;
  CHECK(anosov_cocycle_value(nf) == 0);
}

TEST_CASE("return map jet against the monodromy and finite differences") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("mixed.cfg"));
  auto orb = find_periodic_orbit(t, SymbolicWord::parse("123"));
  JetMap g = return_map_jet(t, orb, 3);
  Mat2 m = g.linear();
  CHECK(abs(m.a - orb.monodromy.a) < 1e-40);
  CHECK(abs(m.b - orb.monodromy.b) < 1e-40);
  CHECK(abs(m.c - orb.monodromy.c) < 1e-40);
  CHECK(abs(m.d - orb.monodromy.d) < 1e-40);
  CHECK(abs(g.x.value()) + abs(g.y.value()) == 0);

  const PhasePoint& x = orb.points[0];
  const Real per = t[x.obstacle].perimeter();
  auto image = [&](const Real& ds, const Real& dphi) {
    PhasePoint y{x.obstacle, x.s + ds, x.phi + dphi};
    for (int k = 0; k < orb.period(); ++k) y = billiard_step(t, y).next;
    return Vec2{wrap_centered(y.s - x.s, per), y.phi - x.phi};
  };
  Real h("1e-12");
  Vec2 f0 = image(0, 0);
  Vec2 fss = Real(1) / (h * h) * (image(h, 0) - 2 * f0 + image(-h, 0));
  Vec2 fpp = Real(1) / (h * h) * (image(0, h) - 2 * f0 + image(0, -h));
  Vec2 fsp = Real(1) / (4 * h * h) * (image(h, h) - image(h, -h) - image(-h, h) + image(-h, -h));
  CHECK(abs(fss.x - 2 * g.x.coeff(2, 0)) < 1e-5);
  CHECK(abs(fss.y - 2 * g.y.coeff(2, 0)) < 1e-5);
  CHECK(abs(fpp.x - 2 * g.x.coeff(0, 2)) < 1e-5);
  CHECK(abs(fpp.y - 2 * g.y.coeff(0, 2)) < 1e-5);
  CHECK(abs(fsp.x - g.x.coeff(1, 1)) < 1e-5);
  CHECK(abs(fsp.y - g.y.coeff(1, 1)) < 1e-5);
}

TEST_CASE("orbit invariants do not depend on the base collision") {
  PrecisionScope scope(256);
  for (const auto& name : bundled_tables()) {
    auto t = load_table(config_path(name));
    auto orb = find_periodic_orbit(t, SymbolicWord::parse("1213"));
    NormalForm n0 = orbit_normal_form(t, orb, 3, 7, 0);
    NormalForm n2 = orbit_normal_form(t, orb, 3, 7, 2);
    CAPTURE(name);
    CHECK(n0.residual < 1e-30 * (1 + n0.normalized.max_abs()));
    for (int k = 0; k <= 3; ++k)
      CHECK(abs(n0.a[k] - n2.a[k]) < 1e-20 * (1 + abs(n0.a[k])));
    CHECK(abs(n0.lambda - orb.lambda) < 1e-40);
    CHECK(abs(anosov_cocycle_value(n0) - anosov_cocycle_from_jet(n0)) < 1e-18);
  }
}

TEST_CASE("mirror frame on the symmetric table") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks.cfg"));
  auto core = find_periodic_orbit(t, SymbolicWord::parse("12"));
  NormalForm nf = orbit_normal_form(t, core);
  auto hs = find_homoclinic_segment(t, core, SymbolicWord::parse("13", false), 20);
  HomoclinicFrame fr = mirror_normalize(t, nf, hs);
  CHECK(fr.xi_inf != 0);
  CHECK(abs(fr.xi_inf * fr.xi_inf - fr.xi_inf_sq) < 1e-40);
  CHECK(abs(fr.g[0] * (fr.gamma[1] - fr.w1) - 1) < 1e-30);
  CHECK(abs(fr.frame_identity) < 1e-30);
  CHECK(fr.mirror_residual < 1e-25);
  CHECK(fr.structure_residual < 1e-20);
  CHECK(abs(fr.a_bar[0] - 1) < 1e-60);
  CHECK(abs(fr.gamma_bar[0] - 1) < 1e-60);
  CHECK(abs(fr.g_bar[0] - fr.g[0]) < 1e-60);
  Real c = fr.correction[0];
  CHECK(c > 0);

  // g0 is the leading coefficient of the horseshoe traces.
  auto h = find_periodic_orbit(t, horseshoe_word(core.word, SymbolicWord::parse("13", false), 10));
  Real lead = h.monodromy.trace() * pow(core.lambda, 10);
  CHECK(abs(lead / fr.g[0] - 1) < 1e-12);

  // a deeper segment and deeper anchors give the same frame
  auto hs2 = find_homoclinic_segment(t, core, SymbolicWord::parse("13", false), 25);
  FrameOptions deeper;
  deeper.anchor_radius = 1e-8;
  HomoclinicFrame fr2 = mirror_normalize(t, nf, hs2, deeper);
  CHECK(fr2.deep_blocks > fr.deep_blocks);
  CHECK(abs(fr2.xi_inf - fr.xi_inf) < 1e-25);
  for (int k = 0; k <= 2; ++k) {
    CHECK(abs(fr2.g[k] - fr.g[k]) < 1e-18 * abs(fr.g[0]));
    CHECK(abs(fr2.gamma[k] - fr.gamma[k]) < 1e-18);
  }
}

TEST_CASE("mirror-symmetric preliminary frame needs no correction") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks-asym.cfg"));
  auto core = find_periodic_orbit(t, SymbolicWord::parse("12"));
  NormalForm nf = orbit_normal_form(t, core);
  auto hs = find_homoclinic_segment(t, core, SymbolicWord::parse("13", false), 20);
  HomoclinicFrame fr = mirror_normalize(t, nf, hs);
  std::vector<Real> d(fr.correction.order() + 1);
  for (int k = 0; k <= fr.correction.order(); ++k) d[k] = fr.correction[k];
  NormalForm shifted = nf;
  shifted.conjugacy = compose(normal_form_power(d, 1, Real(0), Real(0), nf.order), nf.conjugacy);
  shifted.inverse = compose(nf.inverse, normal_form_power(d, -1, Real(0), Real(0), nf.order));
  HomoclinicFrame again = mirror_normalize(t, shifted, hs);
  CHECK(abs(again.correction[0] - 1) < 1e-30);
  for (int k = 1; k <= 2; ++k) CHECK(abs(again.correction[k]) < 1e-20 * pow(abs(fr.xi_inf), -2 * k));
  CHECK(abs(again.xi_inf - fr.xi_inf) < 1e-30);
  CHECK(abs(again.g[0] - fr.g[0]) < 1e-25 * abs(fr.g[0]));
  CHECK(abs(again.gamma[1] - fr.gamma[1]) < 1e-25);
}

TEST_CASE("opposite anchor signs are rejected") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks-asym.cfg"));
  auto core = find_periodic_orbit(t, SymbolicWord::parse("123"));
  NormalForm nf = orbit_normal_form(t, core);
  auto hs = find_homoclinic_segment(t, core, SymbolicWord::parse("13", false), 20);
  CHECK_THROWS_AS(mirror_normalize(t, nf, hs), Error);
}
