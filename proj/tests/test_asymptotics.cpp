#include <doctest.h>

#include "rigidity/asymptotics.hpp"
#include "support.hpp"

using namespace rigidity;
using namespace testing_support;

namespace {

const SymbolicWord kBlock = SymbolicWord::parse("12");
const SymbolicWord kConnector = SymbolicWord::parse("13", false);

struct Flagship {
  BilliardTable table;
  PeriodicOrbit core;
  NormalForm nf;
  HomoclinicFrame frame;
  HorseshoeFamily family;
};

Flagship flagship(const std::string& cfg) {
  Flagship f{load_table(config_path(cfg)), {}, {}, {}, {}};
  f.core = find_periodic_orbit(f.table, kBlock);
  f.nf = orbit_normal_form(f.table, f.core);
  auto hs = find_homoclinic_segment(f.table, f.core, kConnector, 20);
  f.frame = mirror_normalize(f.table, f.nf, hs);
  f.family = horseshoe_family(f.table, kBlock, kConnector, 30);
  return f;
}

// Rows with y_n = lambda^-2 + lambda^(2n+2): a = {lambda}, gamma = {xi, lambda^2}, g = {lambda^-2}.
HorseshoeFamily rigid_pattern(const Real& lam, int n_max) {
  SyntheticGluing data;
  data.a = {lam};
  data.gamma = {Real("0.7"), lam * lam};
  data.g = {1 / (lam * lam)};
  return synthetic_family(data, 1, n_max);
}

}  // namespace

TEST_CASE("horseshoe family rows") {
  PrecisionScope scope(256);
  Flagship f = flagship("three-disks.cfg");
  const auto& fam = f.family;
  REQUIRE(fam.rows.size() == 31);
  CHECK(horseshoe_n_ceiling(fam.lambda) >= 30);
  for (const auto& r : fam.rows) {
    CHECK(r.stationarity < 1e-40);
    CHECK(r.map_period == 2 * (r.n + 1) + 2);
    CHECK(r.points.size() == static_cast<std::size_t>(r.map_period));
  }
  // traces grow like lambda^-n
  for (std::size_t i = 5; i + 1 < fam.rows.size(); ++i) {
    Real q = fam.rows[i + 1].trace / fam.rows[i].trace * fam.lambda;
    CHECK(abs(q - 1) < 1e-3);
  }
  // deep rows shadow the block orbit near the middle of the word
  const auto& deep = fam.rows[28];
  int mid = 2 * 14;
  CHECK(deep.points[mid].obstacle == f.core.points[0].obstacle);
  CHECK(abs(deep.points[mid].s - f.core.points[0].s) < pow(abs(fam.lambda), 12));
  CHECK(abs(deep.points[mid].phi - f.core.points[0].phi) < pow(abs(fam.lambda), 12));

  CHECK_THROWS_AS(horseshoe_family(f.table, kBlock, kConnector, 40), Error);
}

TEST_CASE("horseshoe n = 0 is the orbit of the joined word") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks.cfg"));
  auto fam = horseshoe_family(t, kBlock, kConnector, 0);
  auto orb = find_periodic_orbit(t, SymbolicWord::parse("1213"));
  REQUIRE(fam.rows.size() == 1);
  CHECK(abs(fam.rows[0].flow_period - orb.flow_period) < 1e-60);
  CHECK(abs(fam.rows[0].trace - orb.monodromy.trace()) < 1e-55);
}

TEST_CASE("period and trace fits on the symmetric table") {
  PrecisionScope scope(256);
  Flagship f = flagship("three-disks.cfg");
  const Real lam = f.family.lambda;

  FitReport p = fit_period_expansion(f.family);
  CHECK(abs(p.get("L0").value - f.core.flow_period) < pow(abs(lam), 25));
  CHECK(abs(p.get("L0").value - 8) < 1e-50);
  CHECK(p.get("L1").uncertainty < 1e-40);
  REQUIRE(p.decay_ratios.size() >= 10);
  for (std::size_t i = p.decay_ratios.size() - 10; i < p.decay_ratios.size(); ++i) {
    Real q = p.decay_ratios[i] / lam;
    CHECK(q > Real("0.5"));
    CHECK(q < 2);
  }

  FitReport tr = fit_trace_expansion(f.family, lam);
  const Real c0 = tr.get("C0").value, b = tr.get("B").value;
  CHECK(abs(c0 / f.frame.g[0] - 1) < 0.05);
  Real predicted = -2 / lam * f.frame.xi_inf_sq * f.nf.a[1];
  CHECK(abs(b / c0 / predicted - 1) < 0.1);
  CHECK(abs(b) > 10 * tr.get("B").uncertainty);

  FitOptions few;
  few.n_max = 2;
  CHECK_THROWS_AS(fit_period_expansion(f.family, few), Error);
}

TEST_CASE("trace fit on the asymmetric table") {
  PrecisionScope scope(256);
  Flagship f = flagship("three-disks-asym.cfg");
  FitReport tr = fit_trace_expansion(f.family, f.family.lambda);
  CHECK(abs(tr.get("C0").value / f.frame.g[0] - 1) < 0.05);
  Real predicted = -2 / f.family.lambda * f.frame.xi_inf_sq * f.nf.a[1];
  CHECK(abs(tr.get("B").value / tr.get("C0").value / predicted - 1) < 0.1);
}

TEST_CASE("series fit") {
  PrecisionScope scope(256);
  Flagship f = flagship("three-disks.cfg");
  const Real lam = f.family.lambda;
  FitReport s0 = fit_series(f.family, lam, 0);
  FitReport s1 = fit_series(f.family, lam, 1);
  FitReport s2 = fit_series(f.family, lam, 2);
  CHECK(s2.coefficients.size() == 6);
  CHECK(s2.has("L22"));
  // lower orders nest
  CHECK(abs(s0.get("L00").value / s2.get("L00").value - 1) < 1e-20);
  CHECK(abs(s1.get("L11").value / s2.get("L11").value - 1) < 1e-20);
  // the first-order coefficient is -2 g0 abar_1
  Real expected = -2 * f.frame.g[0] * f.frame.a_bar[1];
  CHECK(abs(s2.get("L11").value / expected - 1) < 1e-6);
  CHECK(abs(s2.get("L00").value / f.frame.g_bar[0] - 1) < 1e-20);

  std::vector<std::pair<int, int>> only{{0, 0}, {1, 1}};
  FitReport r = fit_series(f.family, lam, 1, only);
  CHECK(r.coefficients.size() == 2);
  CHECK_FALSE(r.has("L01"));

  PrecisionScope low(128);
  HorseshoeFamily fam = rigid_pattern(Real("0.01"), 12);
  CHECK_THROWS_AS(fit_series(fam, fam.lambda, 4), Error);
}

TEST_CASE("rigid synthetic pattern") {
  PrecisionScope scope(256);
  const Real lam("0.01");
  HorseshoeFamily fam = rigid_pattern(lam, 24);
  for (const auto& r : fam.rows) {
    Real y = pow(lam, r.n) * r.trace;
    CHECK(abs(y / (1 / (lam * lam) + pow(lam, 2 * r.n + 2)) - 1) < 1e-60);
  }
  FitReport s = fit_series(fam, lam, 2);
  CHECK(abs(s.get("L00").value * lam * lam - 1) < 1e-50);
  CHECK(abs(s.get("L02").value - lam * lam) < 10 * s.get("L02").uncertainty);
  CHECK(abs(s.get("L02").value / (lam * lam) - 1) < 1e-12);
  for (const auto& c : s.coefficients) {
    if (c.name == "L00" || c.name == "L02") continue;
    CHECK(abs(c.value) < 10 * c.uncertainty);
  }

  FitReport tr = fit_trace_expansion(fam, lam);
  CHECK(abs(tr.get("B").value) < 10 * tr.get("B").uncertainty);
}

TEST_CASE("synthetic family reproduces the trace prediction") {
  PrecisionScope scope(256);
  SyntheticGluing data;
  const Real lam("0.05");
  data.a = {lam, Real("0.3")};
  data.gamma = {Real("0.8"), Real("0.4")};
  data.g = {Real("2.5"), Real("0.1")};
  HorseshoeFamily fam = synthetic_family(data, 1, 28);
  FitReport tr = fit_trace_expansion(fam, lam);
  const Real xi = data.gamma[0], g0 = data.g[0];
  CHECK(abs(tr.get("C0").value / g0 - 1) < 1e-30);
  Real predicted = -2 / lam * xi * xi * data.a[1];
  CHECK(abs(tr.get("B").value / tr.get("C0").value / predicted - 1) < 1e-20);
}

TEST_CASE("equal exponents give C_inf consistency") {
  PrecisionScope scope(256);
  const Real h("0.9"), l0("2.0"), l1("0.6"), c("-0.35");
  HorseshoeFamily fam = synthetic_equal_exponent_family(h, l0, l1, c, 0, 30);
  FitReport p = fit_period_expansion(fam);
  CHECK(abs(p.get("L0").value - l0) < 1e-40);
  CHECK(abs(p.get("L1").value - l1) < 1e-40);
  FitReport tr = fit_trace_expansion(fam, fam.lambda);
  // lambda^n 2 cosh(h l_n) -> exp(h l1)
  CHECK(abs(tr.get("C0").value / exp(h * l1) - 1) < 1e-30);
  for (const auto& r : fam.rows) CHECK(abs(r.le * r.map_period - h * r.flow_period) < 1e-50);
}

TEST_CASE("rigidity verdicts") {
  PrecisionScope scope(256);
  auto t = load_table(config_path("three-disks.cfg"));
  std::vector<SymbolicWord> words;
  for (const char* w : {"12", "13", "23", "1213", "1323"}) words.push_back(SymbolicWord::parse(w));
  RigidityReport rep = rigidity_report(t, words);
  CHECK(rep.verdict == kVerdictObstructed);
  CHECK(rep.orbits.size() == 5);
  CHECK(rep.dispersion > 1e-3);
  CHECK(rep.reasons.size() >= 2);
  Real spread = 0;
  for (const auto& o : rep.orbits) {
    CHECK(o.a1_uncertainty < 1e-40);
    CHECK(abs(o.a1) > 1e-6);
    spread = std::max(spread, abs(o.cohomology_defect));
  }
  CHECK(spread > 1e-3);
  // symmetric copies agree
  CHECK(abs(rep.orbits[0].a1 - rep.orbits[1].a1) < 1e-50);

  RigidityReport one = rigidity_report(t, {SymbolicWord::parse("12")});
  CHECK(one.verdict == kVerdictInconclusive);
  CHECK(one.dispersion == 0);

  // equal exponents and vanishing invariants
  std::vector<OrbitDiagnostic> flat;
  for (int k = 1; k <= 3; ++k) {
    OrbitDiagnostic d;
    d.word = std::to_string(k);
    d.flow_exponent = Real("0.7");
    d.flow_period = Real(k);
    d.lambda = exp(-Real("0.7") * k);
    d.a1 = 0;
    d.a1_uncertainty = Real("1e-60");
    flat.push_back(d);
  }
  RigidityReport ok = rigidity_verdict(flat, Real("1e-30"));
  CHECK(ok.verdict == kVerdictNoObstruction);
  CHECK(ok.reasons.empty());
  for (const auto& o : ok.orbits) CHECK(abs(o.cohomology_defect) < 1e-60);
  flat[1].a1 = Real("1e-3");
  CHECK(rigidity_verdict(flat, Real("1e-30")).verdict == kVerdictObstructed);
}
