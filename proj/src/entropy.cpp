#include "rigidity/entropy.hpp"

#include "rigidity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace rigidity {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double xlogx(double p) { return p > 0 ? p * std::log(p) : 0.0; }

Matrix64 weighted(const MarkovSystem& sys, const Matrix64& psi) {
  const int m = sys.size();
  require(psi.rows() == m && psi.cols() == m, "potential must be m x m");
  Matrix64 M = Matrix64::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (sys.adjacency(i, j)) M(i, j) = std::exp(psi(i, j));
  return M;
}

// Power iteration on M from v0 with Collatz-Wielandt bounds.
Eigen::VectorXd power_polish(const Matrix64& M, Eigen::VectorXd v, double tol, double* lo,
                             double* hi, int* iterations) {
  const double tiny = 1e-300;
  v = v.cwiseMax(tiny * v.maxCoeff());
  v /= v.sum();
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd w = M * v;
    double l = std::numeric_limits<double>::infinity(), h = 0;
    for (int i = 0; i < v.size(); ++i) {
      double q = w(i) / v(i);
      l = std::min(l, q);
      h = std::max(h, q);
    }
    *lo = l;
    *hi = h;
    *iterations = it + 1;
    w = w.cwiseMax(tiny * w.maxCoeff());
    v = w / w.sum();
    if (h - l <= tol * h) break;
  }
  return v;
}

double cylinder_entropy_rate(const Eigen::MatrixXi& A) {
  if (A.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd D = A.cast<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> es(D, false);
  double r = es.eigenvalues().cwiseAbs().maxCoeff();
  return r > 0 ? std::log(r) : -std::numeric_limits<double>::infinity();
}

Eigen::MatrixXi remove_state(const Eigen::MatrixXi& A, int k) {
  const int m = static_cast<int>(A.rows());
  Eigen::MatrixXi B(m - 1, m - 1);
  for (int i = 0, bi = 0; i < m; ++i) {
    if (i == k) continue;
    for (int j = 0, bj = 0; j < m; ++j) {
      if (j == k) continue;
      B(bi, bj++) = A(i, j);
    }
    ++bi;
  }
  return B;
}

// Bisection for a sign change of f on [a, b] with f(a) and f(b) given.
template <class F>
double bisect(F f, double a, double b, double fa, double tol) {
  for (int it = 0; it < 200 && std::fabs(b - a) > tol; ++it) {
    double c = 0.5 * (a + b);
    double fc = f(c);
    if (fc == 0) return c;
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

bool is_primitive(const Eigen::MatrixXi& A) {
  const long m = A.rows();
  if (m == 0 || A.cols() != m) return false;
  Eigen::MatrixXi B = (A.array() > 0).cast<int>();
  const long bound = (m - 1) * (m - 1) + 1;
  for (long power = 1; power < bound; power *= 2) {
    B = B * B;
    B = (B.array() > 0).cast<int>();
  }
  return (B.array() > 0).all();
}

MarkovSystem MarkovSystem::make(const Eigen::MatrixXi& adjacency, const Matrix64& roof,
                                const Matrix64& potential) {
  const long m = adjacency.rows();
  require(m > 0 && adjacency.cols() == m, "adjacency matrix must be square and nonempty");
  require(((adjacency.array() == 0) || (adjacency.array() == 1)).all(),
          "adjacency entries must be 0 or 1");
  require(is_primitive(adjacency), "adjacency matrix is reducible or periodic");
  MarkovSystem sys;
  sys.adjacency = adjacency;
  if (roof.size() > 0) sys = sys.with_roof(roof);
  if (potential.size() > 0) {
    require(potential.rows() == m && potential.cols() == m, "potential must be m x m");
    sys.potential = potential;
  }
  return sys;
}

MarkovSystem MarkovSystem::with_roof(const Matrix64& r) const {
  const int m = size();
  require(r.rows() == m && r.cols() == m, "roof must be m x m");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (adjacency(i, j))
        require(r(i, j) > 0 && std::isfinite(r(i, j)), "roof values must be positive");
  MarkovSystem out = *this;
  out.roof = r;
  return out;
}

std::vector<std::pair<int, int>> MarkovSystem::edges() const {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (adjacency(i, j)) e.push_back({i, j});
  return e;
}

MarkovMeasure MarkovMeasure::from_transition(const Matrix64& P) {
  const long m = P.rows();
  require(m > 0 && P.cols() == m, "transition matrix must be square");
  require((P.array() >= 0).all(), "transition probabilities must be nonnegative");
  MarkovMeasure mu;
  mu.P = P;
  for (long i = 0; i < m; ++i) {
    double s = P.row(i).sum();
    require(std::fabs(s - 1) < 1e-12, "transition rows must sum to 1");
    mu.P.row(i) /= s;
  }
  Matrix64 S = mu.P.transpose() - Matrix64::Identity(m, m);
  S.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1;
  mu.pi = S.fullPivLu().solve(rhs);
  require(mu.pi.minCoeff() > -1e-12, "transition matrix has no positive stationary vector");
  mu.pi = mu.pi.cwiseMax(0.0);
  mu.pi /= mu.pi.sum();
  require(mu.stationarity_residual() < 1e-14, "stationary vector did not converge");
  return mu;
}

double MarkovMeasure::stationarity_residual() const {
  Eigen::RowVectorXd r = pi.transpose() * P - pi.transpose();
  return r.cwiseAbs().maxCoeff();
}

Matrix64 MarkovMeasure::edge_mass() const { return pi.asDiagonal() * P; }

bool MarkovMeasure::compatible(const MarkovSystem& sys) const {
  if (P.rows() != sys.size()) return false;
  for (int i = 0; i < sys.size(); ++i)
    for (int j = 0; j < sys.size(); ++j)
      if (P(i, j) > 0 && !sys.adjacency(i, j)) return false;
  return true;
}

PerronData perron(const Matrix64& M, double tol) {
  const long m = M.rows();
  require(m > 0 && M.cols() == m, "Perron matrix must be square");
  require((M.array() >= 0).all(), "Perron matrix must be nonnegative");
  double top = M.maxCoeff();
  require(top > 0, "Perron matrix is zero");
  // high powers by squaring give the Perron vectors as row and column sums
  Matrix64 B = M / top;
  for (int k = 0; k < 30; ++k) {
    B = B * B;
    double s = B.maxCoeff();
    if (!(s > 0)) fail(ErrorKind::nonconvergence, "Perron iteration underflowed");
    B /= s;
  }
  PerronData out;
  double lo = 0, hi = 0, llo = 0, lhi = 0;
  int it = 0, lit = 0;
  out.right = power_polish(M, B.rowwise().sum(), tol, &lo, &hi, &it);
  out.left = power_polish(M.transpose(), B.colwise().sum().transpose(), tol, &llo, &lhi, &lit);
  out.lower = std::max(lo, llo);
  out.upper = std::min(hi, lhi);
  if (out.lower > out.upper) std::swap(out.lower, out.upper);
  out.iterations = std::max(it, lit);
  if (out.upper - out.lower > 1e3 * tol * out.upper)
    fail(ErrorKind::nonconvergence, "Perron bounds did not meet: [" + fmt(out.lower) + ", " +
                                        fmt(out.upper) + "]");
  double rq = out.left.dot(M * out.right) / out.left.dot(out.right);
  out.root = std::clamp(rq, out.lower, out.upper);
  out.left /= out.left.dot(out.right);
  return out;
}

double sft_entropy(const MarkovSystem& sys) {
  return std::log(perron(sys.adjacency.cast<double>()).root);
}

double markov_entropy(const MarkovMeasure& mu) {
  double h = 0;
  for (long i = 0; i < mu.P.rows(); ++i)
    for (long j = 0; j < mu.P.cols(); ++j) h -= mu.pi(i) * xlogx(mu.P(i, j));
  return h;
}

MarkovMeasure equilibrium_measure(const MarkovSystem& sys, const Matrix64& psi) {
  Matrix64 M = weighted(sys, psi);
  PerronData pd = perron(M);
  const int m = sys.size();
  Matrix64 P(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) P(i, j) = M(i, j) * pd.right(j) / (pd.root * pd.right(i));
  for (int i = 0; i < m; ++i) P.row(i) /= P.row(i).sum();
  return MarkovMeasure::from_transition(P);
}

MarkovMeasure parry_measure(const MarkovSystem& sys) {
  return equilibrium_measure(sys, Matrix64::Zero(sys.size(), sys.size()));
}

double pressure(const MarkovSystem& sys, const Matrix64& psi) {
  return std::log(perron(weighted(sys, psi)).root);
}

double integrate(const MarkovMeasure& mu, const Matrix64& f) {
  require(f.rows() == mu.P.rows() && f.cols() == mu.P.cols(), "function must be m x m");
  double s = 0;
  for (long i = 0; i < f.rows(); ++i)
    for (long j = 0; j < f.cols(); ++j)
      if (mu.P(i, j) > 0) s += mu.pi(i) * mu.P(i, j) * f(i, j);
  return s;
}

double suspension_htop(const MarkovSystem& sys) {
  require(sys.has_roof(), "suspension needs a roof");
  const double h = sft_entropy(sys);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
  for (auto [i, j] : sys.edges()) {
    rmin = std::min(rmin, sys.roof(i, j));
    rmax = std::max(rmax, sys.roof(i, j));
  }
  auto f = [&](double s) { return pressure(sys, -s * sys.roof); };
  // P(-s r) lies between h - s rmax and h - s rmin
  double lo = h / rmax, hi = h / rmin;
  if (h <= 0) return 0;
  double s = lo, fs = f(s);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    if (fs > prev + 1e-14) fail(ErrorKind::internal, "pressure is not decreasing in s");
    prev = fs;
    if (fs > 0) lo = std::max(lo, s);
    else hi = std::min(hi, s);
    MarkovMeasure mu = equilibrium_measure(sys, -s * sys.roof);
    double slope = -integrate(mu, sys.roof);
    double next = s - fs / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double step = std::fabs(next - s);
    s = next;
    fs = f(s);
    if (std::fabs(fs) < 1e-15 || step < 1e-15 * s) break;
  }
  if (std::fabs(fs) > 1e-12) fail(ErrorKind::nonconvergence, "suspension root not found");
  return s;
}

double abramov(const MarkovMeasure& mu, const MarkovSystem& sys) {
  require(sys.has_roof(), "Abramov formula needs a roof");
  require(mu.compatible(sys), "measure is not supported on the shift");
  return markov_entropy(mu) / integrate(mu, sys.roof);
}

MarkovMeasure interpolated_measure(const MarkovSystem& sys, double t) {
  require(t >= 0 && t <= 1, "interpolation parameter must lie in [0, 1]");
  const int m = sys.size();
  const Eigen::MatrixXi& A = sys.adjacency;
  // shortest cycle through state 0
  std::vector<int> parent(m, -1), pref(m, -1);
  std::vector<bool> seen(m, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int last = -1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    if (A(i, 0)) {
      last = i;
      break;
    }
    for (int j = 0; j < m; ++j)
      if (A(i, j) && !seen[j]) {
        seen[j] = true;
        parent[j] = i;
        queue.push_back(j);
      }
  }
  pref[last] = 0;
  for (int j = last; j != 0; j = parent[j]) pref[parent[j]] = j;
  // remaining states step toward the cycle
  std::deque<int> front;
  for (int i = 0; i < m; ++i)
    if (pref[i] >= 0) front.push_back(i);
  while (!front.empty()) {
    int j = front.front();
    front.pop_front();
    for (int i = 0; i < m; ++i)
      if (A(i, j) && pref[i] < 0) {
        pref[i] = j;
        front.push_back(i);
      }
  }
  const double eps = 1e-8;
  Matrix64 D = Matrix64::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    int deg = A.row(i).sum();
    for (int j = 0; j < m; ++j)
      if (A(i, j)) D(i, j) = j == pref[i] ? 1 - eps * (deg - 1) : eps;
  }
  MarkovMeasure parry = parry_measure(sys);
  return MarkovMeasure::from_transition((1 - t) * parry.P + t * D);
}

Matrix64 concentrated_roof(const MarkovSystem& sys, const MarkovMeasure& mu, int k, double delta) {
  const int m = sys.size();
  require(k >= 0 && k < m, "cylinder index out of range");
  require(delta > 0 && delta <= 1, "delta must lie in (0, 1]");
  double mass = mu.pi(k);
  require(mass > 0, "cylinder has zero measure");
  double big = (1 - delta * (1 - mass)) / mass;
  Matrix64 r = Matrix64::Zero(m, m);
  for (auto [i, j] : sys.edges()) r(i, j) = j == k ? big : delta;
  return r;
}

BlockPresentation block_presentation(const MarkovSystem& sys, int L) {
  require(L >= 1, "block length must be positive");
  const int m = sys.size();
  BlockPresentation b;
  for (int i = 0; i < m; ++i) b.words.push_back({i});
  for (int len = 1; len < L; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : b.words)
      for (int j = 0; j < m; ++j)
        if (sys.adjacency(w.back(), j)) {
          next.push_back(w);
          next.back().push_back(j);
        }
    b.words = std::move(next);
  }
  const int n = static_cast<int>(b.words.size());
  Eigen::MatrixXi A = Eigen::MatrixXi::Zero(n, n);
  Matrix64 roof, potential;
  if (sys.has_roof()) roof = Matrix64::Zero(n, n);
  if (sys.potential.size() > 0) potential = Matrix64::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const auto &a = b.words[u], &c = b.words[v];
      if (!std::equal(a.begin() + 1, a.end(), c.begin()) || !sys.adjacency(a.back(), c.back()))
        continue;
      A(u, v) = 1;
      if (roof.size()) roof(u, v) = sys.roof(a.back(), c.back());
      if (potential.size()) potential(u, v) = sys.potential(a.back(), c.back());
    }
  b.system = MarkovSystem::make(A, roof, potential);
  return b;
}

MarkovMeasure lift_measure(const BlockPresentation& block, const MarkovMeasure& mu) {
  const int n = block.system.size();
  Matrix64 P = Matrix64::Zero(n, n);
  for (auto [u, v] : block.system.edges()) P(u, v) = mu.P(block.words[u].back(), block.words[v].back());
  return MarkovMeasure::from_transition(P);
}

Matrix64 jacobian_roof(const MarkovSystem& sys, const MarkovMeasure& mu) {
  double h = markov_entropy(mu);
  require(h > 0, "Jacobian roof needs positive entropy");
  Matrix64 r = Matrix64::Zero(sys.size(), sys.size());
  for (auto [i, j] : sys.edges()) {
    require(mu.P(i, j) > 0, "Jacobian roof needs full support on the edges");
    r(i, j) = -std::log(mu.P(i, j)) / h;
  }
  return r;
}

FlexibilityResult solve_flexibility(const MarkovSystem& sys, double c_mu, double c_top,
                                    FlexRegion region) {
  require(c_mu > 0 && c_top > 0, "targets must be positive");
  const double h = sft_entropy(sys);
  const double tol = 1e-12;
  if (c_mu > h + tol)
    fail(ErrorKind::infeasible, "measure entropy " + fmt(c_mu) + " exceeds the shift entropy " +
                                    fmt(h) + "; achievable c_mu in (0, " + fmt(h) + "]");
  if (c_top < c_mu - tol)
    fail(ErrorKind::infeasible, "c_top below c_mu violates the variational principle");

  FlexibilityResult res;
  // base measure with entropy c_mu
  auto ent = [&](double t) { return markov_entropy(interpolated_measure(sys, t)) - c_mu; };
  double f0 = h - c_mu, f1 = ent(1.0);
  if (f1 > 0)
    fail(ErrorKind::infeasible, "measure entropy " + fmt(c_mu) + " below the family floor; " +
                                    "achievable c_mu in [" + fmt(f1 + c_mu) + ", " + fmt(h) + "]");
  res.measure_parameter = f0 <= tol ? 0.0 : bisect(ent, 0.0, 1.0, f0, 1e-15);
  res.measure = interpolated_measure(sys, res.measure_parameter);
  res.system = sys;
  const int m = sys.size();
  const Matrix64 ones = Matrix64::Ones(m, m);

  if (region == FlexRegion::I) {
    const MarkovMeasure& mu = res.measure;
    if (c_top > h + tol)
      fail(ErrorKind::infeasible, "region I needs c_top <= h; achievable c_top in (" + fmt(c_mu) +
                                      ", " + fmt(h) + "]");
    if (c_top <= c_mu + tol && c_mu < h - tol)
      fail(ErrorKind::infeasible, "region I needs c_top > c_mu; achievable c_top in (" +
                                      fmt(c_mu) + ", " + fmt(h) + "]");
    Matrix64 phi = jacobian_roof(sys, mu);
    bool phi_positive = true;
    for (auto [i, j] : sys.edges()) phi_positive = phi_positive && phi(i, j) > 0;
    const double t_hi = phi_positive ? 1.0 : 1 - 1e-9;
    auto roof_at = [&](double t) { return Matrix64((1 - t) * ones + t * phi); };
    auto top = [&](double t) { return suspension_htop(sys.with_roof(roof_at(t))) - c_top; };
    double g0 = h - c_top;
    res.roof_parameter = g0 <= tol ? 0.0 : bisect(top, 0.0, t_hi, g0, 1e-15);
    res.roof = roof_at(res.roof_parameter);
  } else {
    if (c_top < h - tol)
      fail(ErrorKind::infeasible, "region II needs c_top >= h = " + fmt(h));
    // shortest cylinder whose complement keeps entropy, weighted by its mass
    int best = -1;
    for (int L = 1; L <= kMaxBlockLength && best < 0; ++L) {
      BlockPresentation b = block_presentation(sys, L);
      const int n = b.system.size();
      if (n > 512) break;
      MarkovMeasure lifted = lift_measure(b, res.measure);
      double best_score = 0;
      for (int k = 0; n > 1 && k < n; ++k) {
        double rate = cylinder_entropy_rate(remove_state(b.system.adjacency, k));
        double score = rate > 1e-9 ? rate * lifted.pi(k) : 0.0;
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
      if (best >= 0) {
        res.system = b.system;
        res.block_length = L;
        res.measure = lifted;
        res.avoided_word = b.words[best];
      }
    }
    if (best < 0)
      fail(ErrorKind::capability, "no cylinder of length up to " + std::to_string(kMaxBlockLength) +
                                      " has a complement with positive entropy");
    res.avoided_state = best;
    const MarkovSystem& pres = res.system;
    const MarkovMeasure& mu = res.measure;
    auto top = [&](double logd) {
      return suspension_htop(pres.with_roof(concentrated_roof(pres, mu, best, std::exp(logd)))) -
             c_top;
    };
    const double log_min = std::log(1e-12);
    double g0 = top(0.0);
    if (g0 >= -tol) {
      res.roof_parameter = 1.0;
    } else {
      double gmin = top(log_min);
      if (gmin < 0)
        fail(ErrorKind::infeasible, "region II roof family reaches c_top in [" + fmt(h) + ", " +
                                        fmt(gmin + c_top) + "] only");
      res.roof_parameter = std::exp(bisect(top, log_min, 0.0, gmin, 1e-15));
    }
    res.roof = concentrated_roof(pres, mu, best, res.roof_parameter);
  }
  const MarkovMeasure& mu = res.measure;
  MarkovSystem flow = res.system.with_roof(res.roof);
  res.c_mu = abramov(mu, flow);
  res.c_top = suspension_htop(flow);
  res.residual = std::max({std::fabs(res.c_mu - c_mu), std::fabs(res.c_top - c_top),
                           std::fabs(integrate(mu, res.roof) - 1)});
  if (res.residual > 1e-6)
    fail(ErrorKind::nonconvergence, "flexibility residual " + fmt(res.residual));
  return res;
}

// ---- separating bump

namespace {

struct Choice {
  Eigen::MatrixXi g;
  double values[3];
  double separation;
};

double min_gap(const double v[3]) {
  return std::min({std::fabs(v[0] - v[1]), std::fabs(v[0] - v[2]), std::fabs(v[1] - v[2])});
}

Choice choose_edge_function(const MarkovSystem& sys, const Matrix64 mass[3]) {
  const auto edges = sys.edges();
  const int m = sys.size();
  Choice best{Eigen::MatrixXi::Zero(m, m), {0, 0, 0}, -1};
  auto consider = [&](const Eigen::MatrixXi& g) {
    double v[3];
    for (int i = 0; i < 3; ++i) v[i] = (mass[i].array() * g.cast<double>().array()).sum();
    double gap = min_gap(v);
    // normalized by the largest weight so counts stay comparable
    gap /= g.maxCoeff();
    if (gap > best.separation) {
      best.g = g;
      std::copy(v, v + 3, best.values);
      best.separation = gap;
    }
  };
  for (auto [i, j] : edges) {
    Eigen::MatrixXi g = Eigen::MatrixXi::Zero(m, m);
    g(i, j) = 1;
    consider(g);
  }
  if (edges.size() <= 64)
    for (std::size_t a = 0; a < edges.size(); ++a)
      for (std::size_t b = 0; b < edges.size(); ++b)
        for (int w = 1; w <= 3; ++w) {
          if (a == b) continue;
          Eigen::MatrixXi g = Eigen::MatrixXi::Zero(m, m);
          g(edges[a].first, edges[a].second) = 1;
          g(edges[b].first, edges[b].second) = w;
          consider(g);
        }
  return best;
}

int class_of_count(const SeparatingBump& q, long count) {
  double avg = static_cast<double>(count) / q.N;
  for (int j = 0; j < 3; ++j)
    if (std::fabs(avg - q.g_values[j]) < q.eta) return j;
  return -1;
}

}  // namespace

int SeparatingBump::cls(const std::vector<int>& word) const {
  if (N == 0) return -1;
  require(static_cast<int>(word.size()) == N + 1, "bump words have N + 1 states");
  long c = 0;
  for (int k = 0; k < N; ++k) c += g(word[k], word[k + 1]);
  return class_of_count(*this, c);
}

double SeparatingBump::value(const std::vector<int>& word) const {
  int j = cls(word);
  return floor + (j >= 0 ? a[j] : 0.0);
}

Eigen::Vector3d bump_class_mass(const SeparatingBump& q, const MarkovMeasure& mu) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  if (q.N == 0) return out;
  const int m = static_cast<int>(mu.P.rows());
  const int W = q.g.maxCoeff();
  const long width = static_cast<long>(q.N) * W + 1;
  // dist(i, c): mass of paths ending in state i with Birkhoff count c
  Matrix64 dist = Matrix64::Zero(m, width), next(m, width);
  dist.col(0) = mu.pi;
  for (int step = 0; step < q.N; ++step) {
    next.setZero();
    long cmax = static_cast<long>(step) * W;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double p = mu.P(i, j);
        if (p == 0) continue;
        int w = q.g(i, j);
        next.row(j).segment(w, cmax + 1) += p * dist.row(i).segment(0, cmax + 1);
      }
    std::swap(dist, next);
  }
  Eigen::VectorXd by_count = dist.colwise().sum();
  for (long c = 0; c < width; ++c) {
    int j = class_of_count(q, c);
    if (j >= 0) out(j) += by_count(c);
  }
  return out;
}

SeparatingBump separating_bump(const MarkovSystem& sys, const MarkovMeasure& w1,
                               const MarkovMeasure& w2, const MarkovMeasure& w3, double gamma,
                               const BumpOptions& options) {
  require(gamma > 0, "gamma must be positive");
  require(gamma < 2, "gamma must be below 2 for a nonnegative bump");
  const MarkovMeasure* w[3] = {&w1, &w2, &w3};
  Matrix64 mass[3];
  for (int i = 0; i < 3; ++i) {
    require(w[i]->compatible(sys), "measure is not supported on the shift");
    mass[i] = w[i]->edge_mass();
  }
  auto same = [&](int i, int j) { return (mass[i] - mass[j]).cwiseAbs().maxCoeff() < 1e-14; };
  SeparatingBump q;
  q.g = Eigen::MatrixXi::Zero(sys.size(), sys.size());
  q.B = Eigen::Matrix3d::Identity();
  if (same(0, 1) && same(1, 2) && std::fabs(gamma - 1) < 1e-15) {
    q.floor = 1;
    std::fill(q.integrals, q.integrals + 3, 1.0);
    return q;
  }
  if (same(0, 1) || same(0, 2) || same(1, 2))
    fail(ErrorKind::degenerate, "measures are not pairwise distinct on 2-cylinders");
  Choice c = choose_edge_function(sys, mass);
  if (c.separation < 1e-9)
    fail(ErrorKind::degenerate, "no edge function separates the three measures");
  q.g = c.g;
  std::copy(c.values, c.values + 3, q.g_values);
  q.eta = min_gap(c.values) / 3;
  q.floor = gamma / 2;
  const Eigen::Vector3d target(1 - gamma / 2, 1 - gamma / 2, gamma / 2);
  double leak = 0, amin = 0;
  for (int n = std::max(1, options.n_start); n <= options.n_ceiling; n *= 2) {
    q.N = n;
    for (int i = 0; i < 3; ++i) q.B.row(i) = bump_class_mass(q, *w[i]).transpose();
    leak = 0;
    for (int i = 0; i < 3; ++i) leak = std::max(leak, 1 - q.B(i, i));
    Eigen::Vector3d a = q.B.fullPivLu().solve(target);
    amin = a.minCoeff();
    if (leak <= options.alpha && amin > 0) {
      for (int j = 0; j < 3; ++j) q.a[j] = a(j);
      Eigen::Vector3d ints = q.B * a + Eigen::Vector3d::Constant(q.floor);
      for (int i = 0; i < 3; ++i) q.integrals[i] = ints(i);
      const double want[3] = {1, 1, gamma};
      for (int i = 0; i < 3; ++i)
        if (std::fabs(q.integrals[i] - want[i]) > 1e-10)
          fail(ErrorKind::internal, "bump integrals missed their targets");
      return q;
    }
  }
  fail(ErrorKind::capability, "separating bump needs N above the ceiling " +
                                  std::to_string(options.n_ceiling) + " (class leakage " +
                                  fmt(leak) + ", smallest coefficient " + fmt(amin) + ")");
}

Matrix64 edge_bump(const MarkovSystem& sys, const MarkovMeasure& w1, const MarkovMeasure& w2,
                   const MarkovMeasure& w3, double gamma) {
  require(gamma > 0 && gamma < 2, "gamma must lie in (0, 2)");
  const MarkovMeasure* w[3] = {&w1, &w2, &w3};
  Matrix64 mass[3];
  for (int i = 0; i < 3; ++i) mass[i] = w[i]->edge_mass();
  const auto edges = sys.edges();
  const Eigen::Vector3d target(1 - gamma / 2, 1 - gamma / 2, gamma / 2);
  double best = 0;
  Eigen::Vector3d best_a;
  int be[3] = {-1, -1, -1};
  const std::size_t E = edges.size();
  for (std::size_t x = 0; x < E; ++x)
    for (std::size_t y = x + 1; y < E; ++y)
      for (std::size_t z = y + 1; z < E; ++z) {
        const std::size_t idx[3] = {x, y, z};
        Eigen::Matrix3d M;
        for (int i = 0; i < 3; ++i)
          for (int k = 0; k < 3; ++k)
            M(i, k) = mass[i](edges[idx[k]].first, edges[idx[k]].second);
        Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
        if (!lu.isInvertible() || std::fabs(M.determinant()) < 1e-12) continue;
        Eigen::Vector3d a = lu.solve(target);
        if (a.minCoeff() > best) {
          best = a.minCoeff();
          best_a = a;
          be[0] = static_cast<int>(x);
          be[1] = static_cast<int>(y);
          be[2] = static_cast<int>(z);
        }
      }
  if (be[0] < 0) fail(ErrorKind::infeasible, "no edge triple carries a nonnegative bump");
  Matrix64 q = Matrix64::Zero(sys.size(), sys.size());
  for (auto [i, j] : edges) q(i, j) = gamma / 2;
  for (int k = 0; k < 3; ++k) q(edges[be[k]].first, edges[be[k]].second) += best_a(k);
  return q;
}

std::vector<SweepPoint> roof_family_sweep(const MarkovSystem& sys, const MarkovMeasure& mu,
                                          const MarkovMeasure& rho, double gamma, int grid) {
  require(grid >= 1, "grid must be positive");
  MarkovMeasure nu = parry_measure(sys);
  Matrix64 q = edge_bump(sys, mu, nu, rho, gamma);
  Matrix64 phi = jacobian_roof(sys, mu);
  for (auto [i, j] : sys.edges())
    require(phi(i, j) > 0, "Jacobian roof vanishes on an edge; use a measure with mixing rows");
  const int m = sys.size();
  const Matrix64 ones = Matrix64::Ones(m, m);
  std::vector<SweepPoint> out;
  auto add = [&](double s, double t) {
    Matrix64 r = (1 - s) * ((1 - t) * ones + t * q) + s * phi;
    MarkovSystem flow = sys.with_roof(r);
    out.push_back({s, t, abramov(mu, flow), suspension_htop(flow)});
  };
  for (int k = 0; k < grid; ++k) add(double(k) / grid, 0.0);
  for (int k = 0; k < grid; ++k) add(1.0, double(k) / grid);
  for (int k = 0; k < grid; ++k) add(1.0 - double(k) / grid, 1.0);
  for (int k = 0; k < grid; ++k) add(0.0, 1.0 - double(k) / grid);
  return out;
}

}  // namespace rigidity
