#include "rigidity/asymptotics.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rigidity {

namespace {

Real polyval(const std::vector<Real>& c, const Real& x) {
  Real r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Real polyder(const std::vector<Real>& c, const Real& x) {
  Real r = 0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) r = r * x + Real(k) * c[k];
  return r;
}

Real row_floor() { return ldexp(Real(1), 30 - precision_bits()); }

HorseshoeRow synthetic_row(int n, const Real& trace, const Real& flow_period) {
  HorseshoeRow row;
  row.n = n;
  row.map_period = n + 2;
  row.trace = trace;
  Real half = abs(trace) / 2;
  row.le = half > 1 ? Real(log(half + sqrt(half * half - 1)) / row.map_period) : Real(0);
  row.flow_period = flow_period;
  row.stationarity = 0;
  return row;
}

std::vector<const HorseshoeRow*> select_rows(const HorseshoeFamily& family, const FitOptions& o,
                                             const std::function<bool(int)>& keep = {}) {
  std::vector<const HorseshoeRow*> rows;
  for (const auto& r : family.rows) {
    if (r.n < o.n_min) continue;
    if (o.n_max >= 0 && r.n > o.n_max) continue;
    if (keep && !keep(r.n)) continue;
    rows.push_back(&r);
  }
  return rows;
}

// Weighted fit y ~ sum_j c_j basis_j with row scales sigma.
FitReport run_fit(const std::string& model, const std::vector<std::string>& names,
                  const std::vector<const HorseshoeRow*>& rows,
                  const std::function<std::vector<Real>(const HorseshoeRow&)>& basis,
                  const std::function<Real(const HorseshoeRow&)>& y,
                  const std::function<Real(const HorseshoeRow&)>& sigma) {
  Matrix x;
  std::vector<Real> ys, w;
  for (const auto* r : rows) {
    x.push_back(basis(*r));
    ys.push_back(y(*r));
    Real s = sigma(*r);
    w.push_back(1 / (s * s));
  }
  LeastSquaresFit fit = least_squares(x, ys, w);
  const std::size_t k = names.size();
  Real dof = Real(static_cast<long>(rows.size() - k));
  Real inflate = dof > 0 ? std::max(Real(1), fit.weighted_rss / dof) : Real(1);
  FitReport rep;
  rep.model = model;
  rep.residual_floor = row_floor();
  for (std::size_t j = 0; j < k; ++j)
    rep.coefficients.push_back({names[j], fit.coef[j], sqrt(fit.cov_diagonal[j] * inflate)});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rep.ns.push_back(rows[i]->n);
    rep.residuals.push_back(fit.residuals[i]);
  }
  return rep;
}

void fill_ratios(FitReport* rep) {
  rep->decay_ratios.clear();
  for (std::size_t i = 0; i + 1 < rep->residuals.size(); ++i)
    rep->decay_ratios.push_back(rep->residuals[i] == 0 ? Real(0)
                                                       : Real(rep->residuals[i + 1] / rep->residuals[i]));
}

}  // namespace

int horseshoe_n_ceiling(const Real& lambda) {
  double l2 = -std::log2(std::fabs(to_double(lambda)));
  require(l2 > 0, "multiplier must be contracting");
  return static_cast<int>(std::floor((precision_bits() - 40) / l2));
}

HorseshoeFamily horseshoe_family(const BilliardTable& table, const SymbolicWord& block,
                                 const SymbolicWord& connector, int n_max,
                                 const OrbitOptions& options) {
  require(n_max >= 0, "n_max must be non-negative");
  PeriodicOrbit core = find_periodic_orbit(table, block, options);
  int ceiling = horseshoe_n_ceiling(core.lambda);
  if (n_max > ceiling)
    fail(ErrorKind::validation, "n_max " + std::to_string(n_max) + " exceeds the ceiling " +
                                    std::to_string(ceiling) + " supported at " +
                                    std::to_string(precision_bits()) + " bits");
  HorseshoeFamily fam;
  fam.table = table.name();
  fam.block = block;
  fam.connector = connector;
  fam.lambda = core.lambda;
  fam.le_ref = core.le;
  fam.l0 = core.flow_period;
  for (int n = 0; n <= n_max; ++n) {
    SymbolicWord w = horseshoe_word(block, connector, n);
    PeriodicOrbit orb;
    try {
      orb = find_periodic_orbit(table, w, options);
    } catch (const Error& e) {
      fail(e.kind(), "horseshoe orbit n=" + std::to_string(n) + ": " + e.what());
    }
    HorseshoeRow row;
    row.n = n;
    row.map_period = orb.period();
    row.le = orb.le;
    row.flow_period = orb.flow_period;
    row.trace = orb.monodromy.trace();
    row.stationarity = orb.stationarity;
    row.points = std::move(orb.points);
    fam.rows.push_back(std::move(row));
  }
  return fam;
}

HorseshoeFamily synthetic_family(const SyntheticGluing& data, int n_min, int n_max) {
  require(!data.a.empty() && !data.gamma.empty() && !data.g.empty(), "synthetic data incomplete");
  require(n_min >= 1 && n_max >= n_min, "synthetic family needs 1 <= n_min <= n_max");
  const Real lam = data.a[0];
  HorseshoeFamily fam;
  fam.table = "synthetic";
  fam.lambda = lam;
  fam.le_ref = -log(abs(lam));
  fam.l0 = data.l0;
  for (int n = n_min; n <= n_max; ++n) {
    // eta = Delta(xi eta)^n xi with xi = gamma(eta)
    Real eta = pow(lam, n) * data.gamma[0];
    for (int it = 0; it < 500; ++it) {
      Real xi = polyval(data.gamma, eta);
      Real next = pow(polyval(data.a, xi * eta), n) * xi;
      Real diff = abs(next - eta);
      eta = next;
      if (diff <= epsilon() * abs(eta)) break;
    }
    Real xi = polyval(data.gamma, eta);
    Real z = xi * eta;
    Real d = polyval(data.a, z), dp = polyder(data.a, z);
    Real dn = pow(d, n), dmn = pow(d, -n);
    Real m11 = dn + n * dp * dn / d * z;
    Real m12 = n * dp * dn / d * xi * xi;
    Real m21 = -n * dp * dmn / d * eta * eta;
    Real m22 = dmn - n * dp * dmn / d * z;
    Real gp = polyder(data.gamma, eta), gv = polyval(data.g, eta);
    Real g11 = gp * (2 - gp * gv), g12 = gp * gv - 1, g21 = 1 - gp * gv, g22 = gv;
    Real trace = m11 * g11 + m12 * g21 + m21 * g12 + m22 * g22;
    fam.rows.push_back(synthetic_row(n, trace, n * data.l0 + data.l1));
  }
  return fam;
}

HorseshoeFamily synthetic_equal_exponent_family(const Real& h, const Real& l0, const Real& l1,
                                                const Real& c, int n_min, int n_max) {
  require(n_min >= 0 && n_max >= n_min, "synthetic family needs 0 <= n_min <= n_max");
  HorseshoeFamily fam;
  fam.table = "synthetic";
  fam.lambda = exp(-h * l0);
  fam.le_ref = h * l0;
  fam.l0 = l0;
  for (int n = n_min; n <= n_max; ++n) {
    Real len = n * l0 + l1 + c * pow(fam.lambda, n);
    fam.rows.push_back(synthetic_row(n, 2 * cosh(h * len), len));
  }
  return fam;
}

const FitCoefficient& FitReport::get(const std::string& name) const {
  for (const auto& c : coefficients)
    if (c.name == name) return c;
  fail(ErrorKind::validation, "fit has no coefficient " + name);
}

bool FitReport::has(const std::string& name) const {
  for (const auto& c : coefficients)
    if (c.name == name) return true;
  return false;
}

FitReport fit_period_expansion(const HorseshoeFamily& family, const FitOptions& options) {
  auto rows = select_rows(family, options);
  require(rows.size() >= 8, "period fit needs at least 8 rows");
  const Real lam = family.lambda;
  const Real floor = row_floor();
  FitReport rep = run_fit(
      "period", {"L0", "L1", "tail"}, rows,
      [&](const HorseshoeRow& r) { return std::vector<Real>{Real(r.n), Real(1), pow(lam, r.n)}; },
      [](const HorseshoeRow& r) { return r.flow_period; },
      [&](const HorseshoeRow& r) {
        return abs(r.flow_period) * (sqr(Real(r.n + 1)) * pow(abs(lam), 2 * r.n) + floor);
      });
  const Real l0 = rep.get("L0").value, l1 = rep.get("L1").value;
  for (std::size_t i = 0; i < rows.size(); ++i)
    rep.residuals[i] = rows[i]->flow_period - rows[i]->n * l0 - l1;
  fill_ratios(&rep);
  // The tail must decay geometrically at a rate comparable to lambda.
  int bad = 0, seen = 0;
  for (std::size_t i = rep.decay_ratios.size() / 2; i < rep.decay_ratios.size(); ++i) {
    if (abs(rep.residuals[i]) < 100 * floor * abs(rows[i]->flow_period)) continue;
    ++seen;
    Real q = rep.decay_ratios[i] / lam;
    if (!(q > Real("0.1") && q < 10)) ++bad;
  }
  if (seen > 0 && 2 * bad > seen)
    fail(ErrorKind::nonconvergence, "period residuals do not decay geometrically at rate lambda");
  return rep;
}

FitReport fit_trace_expansion(const HorseshoeFamily& family, const Real& lambda,
                              const FitOptions& options) {
  if (!(abs(lambda) < Real("0.9")))
    fail(ErrorKind::degenerate, "trace fit is ill-conditioned for |lambda| >= 0.9");
  auto rows = select_rows(family, options);
  require(rows.size() >= 10, "trace fit needs at least 10 rows");
  const Real floor = row_floor();
  auto y = [&](const HorseshoeRow& r) { return pow(lambda, r.n) * r.trace; };
  FitReport rep = run_fit(
      "trace", {"C0", "B", "C"}, rows,
      [&](const HorseshoeRow& r) {
        Real ln = pow(lambda, r.n);
        return std::vector<Real>{Real(1), r.n * ln, ln};
      },
      y,
      [&](const HorseshoeRow& r) {
        return abs(y(r)) * (sqr(Real(r.n + 1)) * pow(abs(lambda), 2 * r.n) + floor);
      });
  // residuals in trace units
  for (std::size_t i = 0; i < rows.size(); ++i) rep.residuals[i] /= pow(lambda, rows[i]->n);
  fill_ratios(&rep);
  return rep;
}

std::string series_name(int q, int p) { return "L" + std::to_string(q) + std::to_string(p); }

FitReport fit_series(const HorseshoeFamily& family, const Real& lambda, int P,
                     const std::vector<std::pair<int, int>>& only, const FitOptions& options) {
  require(P >= 0, "series order must be non-negative");
  std::vector<std::pair<int, int>> terms;
  for (int p = 0; p <= P; ++p)
    for (int q = 0; q <= p; ++q)
      if (only.empty() || std::find(only.begin(), only.end(), std::make_pair(q, p)) != only.end())
        terms.push_back({q, p});
  require(!terms.empty(), "series fit has no terms");
  const Real floor = row_floor();
  // Rows where the highest power is still above the arithmetic floor.
  auto resolvable = [&](int n) { return pow(abs(lambda), n * P) > 10 * floor; };
  auto rows = select_rows(family, options, resolvable);
  const std::size_t need = static_cast<std::size_t>((P + 1) * (P + 2) / 2 + 5);
  if (rows.size() < need) {
    if (select_rows(family, options).size() >= need)
      fail(ErrorKind::nonconvergence,
           "precision starvation: lambda^(n P) falls below the residual floor; raise the "
           "precision or lower P");
    fail(ErrorKind::validation, "series fit needs at least " + std::to_string(need) + " rows");
  }
  std::vector<std::string> names;
  for (auto [q, p] : terms) names.push_back(series_name(q, p));
  auto y = [&](const HorseshoeRow& r) { return pow(lambda, r.n) * r.trace; };
  FitReport rep = run_fit(
      "series", names, rows,
      [&](const HorseshoeRow& r) {
        std::vector<Real> b;
        for (auto [q, p] : terms) b.push_back(pow(Real(r.n), q) * pow(lambda, r.n * p));
        return b;
      },
      y,
      [&](const HorseshoeRow& r) {
        return abs(y(r)) *
               (pow(Real(r.n + 1), P + 1) * pow(abs(lambda), r.n * (P + 1)) + floor);
      });
  fill_ratios(&rep);
  return rep;
}

RigidityReport rigidity_verdict(std::vector<OrbitDiagnostic> orbits,
                                const Real& dispersion_tolerance) {
  RigidityReport rep;
  rep.dispersion_tolerance = dispersion_tolerance;
  rep.h_ref = 0;
  rep.dispersion = 0;
  if (!orbits.empty()) {
    Real lo = orbits[0].flow_exponent, hi = lo;
    for (const auto& o : orbits) {
      rep.h_ref += o.flow_exponent;
      lo = std::min(lo, o.flow_exponent);
      hi = std::max(hi, o.flow_exponent);
    }
    rep.h_ref /= static_cast<int>(orbits.size());
    rep.dispersion = hi - lo;
  }
  for (auto& o : orbits) o.cohomology_defect = -log(abs(o.lambda)) - rep.h_ref * o.flow_period;
  rep.orbits = std::move(orbits);
  if (rep.orbits.size() < 2) {
    rep.verdict = kVerdictInconclusive;
    rep.reasons.push_back("ensemble has fewer than two orbits");
    return rep;
  }
  if (rep.dispersion > dispersion_tolerance)
    rep.reasons.push_back("flow exponent dispersion " + to_string(rep.dispersion, 6) +
                          " exceeds tolerance " + to_string(dispersion_tolerance, 3));
  for (const auto& o : rep.orbits)
    if (abs(o.a1) > 10 * o.a1_uncertainty)
      rep.reasons.push_back("first Birkhoff invariant of " + o.word + " is " + to_string(o.a1, 6));
  rep.verdict = rep.reasons.empty() ? kVerdictNoObstruction : kVerdictObstructed;
  return rep;
}

RigidityReport rigidity_report(const BilliardTable& table, const std::vector<SymbolicWord>& words,
                               const OrbitOptions& options, double dispersion_tolerance) {
  std::vector<OrbitDiagnostic> diag;
  for (const auto& w : words) {
    PeriodicOrbit orb = find_periodic_orbit(table, w, options);
    NormalForm nf = orbit_normal_form(table, orb, 1, 3, 0, options.step);
    NormalForm alt = orbit_normal_form(table, orb, 1, 5, orb.period() > 1 ? 1 : 0, options.step);
    OrbitDiagnostic d;
    d.word = w.str();
    d.flow_exponent = orbit_flow_exponent(orb);
    d.lambda = orb.lambda;
    d.flow_period = orb.flow_period;
    d.a1 = nf.a[1];
    d.a1_uncertainty = abs(nf.a[1] - alt.a[1]) + ldexp(Real(1), 40 - precision_bits()) * (1 + abs(nf.a[1]));
    diag.push_back(d);
  }
  return rigidity_verdict(std::move(diag), Real(dispersion_tolerance));
}

}  // namespace rigidity
