#include <doctest.h>

#include "rigidity/jet.hpp"
#include "rigidity/series.hpp"

#include <random>

using namespace rigidity;

namespace {

Jet2 random_jet(std::mt19937_64& rng, int order, bool zero_constant) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet2 j(order);
  for (int i = zero_constant ? 1 : 0; i < j.size(); ++i) j[i] = u(rng);
  return j;
}

JetMap random_map(std::mt19937_64& rng, int order) {
  return {random_jet(rng, order, true), random_jet(rng, order, true)};
}

}  // namespace

TEST_CASE("series algebra") {
  PrecisionScope scope(256);
  Series x = Series::variable(12);
  Series e(12);
  Real f = 1;
  for (int k = 0; k <= 12; ++k) {
    if (k) f *= k;
    e[k] = 1 / f;
  }
  // exp(u) * exp(-u) = 1
  Series em(12);
  for (int k = 0; k <= 12; ++k) em[k] = (k % 2 ? -1 : 1) * e[k];
  Series one = e * em;
  CHECK(abs(one[0] - 1) < 1e-70);
  for (int k = 1; k <= 12; ++k) CHECK(abs(one[k]) < 1e-70);

  // reversion of sin gives arcsin: 1, 0, 1/6, 0, 3/40
  Series s = sin_series(Real(0), 9);
  Series r = reversion(s);
  CHECK(abs(r[1] - 1) < 1e-70);
  CHECK(abs(r[3] - Real(1) / 6) < 1e-70);
  CHECK(abs(r[5] - Real(3) / 40) < 1e-70);
  Series back = compose(s, r);
  for (int k = 2; k <= 9; ++k) CHECK(abs(back[k]) < 1e-70);

  Series sq = sqrt(Series(6, Real(4)) + x);
  Series sq2 = sq * sq;
  CHECK(abs(sq2[0] - 4) < 1e-70);
  CHECK(abs(sq2[1] - 1) < 1e-70);
  for (int k = 2; k <= 6; ++k) CHECK(abs(sq2[k]) < 1e-70);
}

TEST_CASE("jet product matches pointwise product of polynomials") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(7);
  for (int order : {1, 3, 6}) {
    Jet2 a = random_jet(rng, order, false), b = random_jet(rng, order, false);
    Jet2 c = a * b;
    Real d1("1e-12"), d2("-3e-12");
    Real lhs = c.evaluate(d1, d2);
    Real rhs = a.evaluate(d1, d2) * b.evaluate(d1, d2);
    CHECK(abs(lhs - rhs) < pow(Real(10), -11 * (order + 1)));
  }
}

TEST_CASE("jet composition is associative at every order") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(11);
  for (int order = 1; order <= 7; ++order) {
    JetMap a = random_map(rng, order), b = random_map(rng, order), c = random_map(rng, order);
    JetMap left = compose(compose(a, b), c);
    JetMap right = compose(a, compose(b, c));
    CHECK((left - right).max_abs() < 1e-60);
  }
}

TEST_CASE("jet inverse and shift") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(13);
  JetMap f = random_map(rng, 6);
  f.x.coeff(1, 0) = 2;  // keep the linear part well conditioned
  f.y.coeff(0, 1) = 3;
  JetMap g = inverse(f);
  JetMap id = compose(f, g);
  JetMap expected = JetMap::identity(6);
  CHECK((id - expected).max_abs() < 1e-60);
  JetMap id2 = compose(g, f);
  CHECK((id2 - expected).max_abs() < 1e-60);

  // Shifted polynomial agrees with the original at the moved point.
  JetMap s = shift(f, Real("0.1"), Real("-0.2"));
  Vec2 a = s.evaluate(Real("0.03"), Real("0.05"));
  Vec2 b = f.evaluate(Real("0.13"), Real("-0.15"));
  CHECK(abs(a.x - b.x) < 1e-60);
  CHECK(abs(a.y - b.y) < 1e-60);
}

TEST_CASE("apply_series and powers") {
  PrecisionScope scope(256);
  Jet2 u = Jet2::variable(6, 0, Real(2)) + Jet2::variable(6, 1) * Real(3);
  Jet2 r = reciprocal(u);
  Jet2 one = r * u;
  CHECK(abs(one.value() - 1) < 1e-70);
  CHECK(one.max_abs(1) < 1e-70);
  Jet2 q = sqrt(u);
  CHECK((q * q - u).max_abs() < 1e-70);
  Jet2 p = pow(u, Real(-3));
  CHECK((p * u * u * u - Jet2::constant(6, Real(1))).max_abs() < 1e-70);
  Jet2 s = apply_series(sin_series(u.value(), 6), u);
  Jet2 c = apply_series(cos_series(u.value(), 6), u);
  CHECK((s * s + c * c - Jet2::constant(6, Real(1))).max_abs() < 1e-70);
}
