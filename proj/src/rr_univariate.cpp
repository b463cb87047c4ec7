#include "srpave/rr_univariate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace srpave {

std::string to_string(const UniPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const double a = p.coeff(k);
    if (a == 0.0) continue;
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    first = false;
    const double m = std::abs(a);
    if (k == 0 || m != 1.0) os << m;
    if (k >= 1) os << (k == 0 || m != 1.0 ? "*x" : "x");
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

namespace rr {
namespace {

struct Cluster {
  double x;
  int mult;
};

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Magnitude scale for the residual test; max(|x|, 1) keeps it from
// collapsing near the origin where an exact root of a rounded
// polynomial would otherwise never be recognised.
double residual_scale(const std::vector<double>& c, double x) {
  const double ax = std::max(std::abs(x), 1.0);
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

double bisect_root(const std::vector<double>& c, const std::vector<double>& dc,
                   double lo, double hi, int sign_hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    const double v = horner(c, mid);
    if (v == 0.0) return mid;
    if (sign_of(v) == sign_hi) hi = mid;
    else lo = mid;
  }
  double x = 0.5 * (lo + hi);
  double fx = std::abs(horner(c, x));
  for (int it = 0; it < 3 && fx > 0.0; ++it) {
    const double d = horner(dc, x);
    if (d == 0.0) break;
    const double nx = x - horner(c, x) / d;
    if (!(nx >= lo && nx <= hi)) break;
    const double fn = std::abs(horner(c, nx));
    if (fn >= fx) break;
    x = nx;
    fx = fn;
  }
  return x;
}

std::vector<Cluster> merge_clusters(std::vector<Cluster> v, double tol) {
  std::sort(v.begin(), v.end(), [](const Cluster& a, const Cluster& b) { return a.x > b.x; });
  std::vector<Cluster> out;
  for (const Cluster& c : v) {
    if (!out.empty() && out.back().x - c.x <= tol) {
      Cluster& b = out.back();
      b.x = (b.x * b.mult + c.x * c.mult) / (b.mult + c.mult);
      b.mult += c.mult;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// f monic of degree k >= 2, crit = clustered roots of f' (descending,
// multiplicities summing to k - 1).
std::vector<Cluster> roots_from_critical(const std::vector<double>& f,
                                         const std::vector<Cluster>& crit,
                                         const RootOptions& opts) {
  const int k = static_cast<int>(f.size()) - 1;
  std::vector<double> df(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) df[i - 1] = f[i] * static_cast<double>(i);

  std::vector<Cluster> found;
  std::vector<double> walls;  // non-root critical points, descending
  std::vector<double> wall_vals;
  std::vector<double> faint;  // walls where f is within the residual tolerance
  // Walking down from +inf, f changes sign between consecutive critical
  // points exactly when both are walls. A critical point with a tiny value of
  // the sign a wall would have stays a wall; bisection then finds both
  // nearby roots.
  bool last_was_root = false;
  int cur = 1;  // sign of f just below the last point visited
  for (const Cluster& c : crit) {
    const double v = horner(f, c.x);
    const int wall_sign = last_was_root ? cur : -cur;
    const bool small = std::abs(v) <= opts.residual_tol * residual_scale(f, c.x);
    if (small && (c.mult >= 2 || sign_of(v) != wall_sign)) {
      // Two root-like critical points with no wall between them belong to
      // one root cluster of f.
      if (last_was_root) {
        Cluster& b = found.back();
        b.x = (b.x * (b.mult - 1) + c.x * c.mult) / (b.mult - 1 + c.mult);
        b.mult += c.mult;
        if (c.mult % 2) cur = -cur;
      } else {
        found.push_back({c.x, c.mult + 1});
        if ((c.mult + 1) % 2) cur = -cur;
      }
      last_was_root = true;
    } else {
      if (c.mult >= 2) {
        throw Error(Errc::NotRealRooted, "multiple critical point off the real roots");
      }
      last_was_root = false;
      cur = sign_of(v);
      if (small) faint.push_back(c.x);
      walls.push_back(c.x);
      wall_vals.push_back(v);
    }
  }

  double bound = 1.0;
  for (int i = 0; i < k; ++i) bound = std::max(bound, 1.0 + std::abs(f[static_cast<std::size_t>(i)]));

  // Interval m runs from walls[m] (lower) up to walls[m-1] (upper); the
  // outermost ones are bounded by the Cauchy radius.
  const std::size_t s = walls.size();
  for (std::size_t m = 0; m <= s; ++m) {
    const bool has_hi = m > 0;
    const bool has_lo = m < s;
    const double hi = has_hi ? walls[m - 1] : std::max(bound, (s ? walls[0] : 0.0) + 1.0);
    const double lo = has_lo ? walls[m] : std::min(-bound, (s ? walls[s - 1] : 0.0) - 1.0);
    bool occupied = false;
    for (const Cluster& r : found) {
      if (r.x > lo && r.x < hi) occupied = true;
    }
    if (occupied) continue;
    const int sh = has_hi ? sign_of(wall_vals[m - 1]) : 1;
    const int sl = has_lo ? sign_of(wall_vals[m]) : ((k % 2 == 0) ? 1 : -1);
    if (sh != sl && sh != 0 && sl != 0) {
      found.push_back({bisect_root(f, df, lo, hi, sh), 1});
    }
  }

  // A faint wall flanked by two very close simple roots is a double root
  // whose rounded coefficients split it; the critical point is the sharper
  // estimate.
  if (!faint.empty()) {
    std::sort(found.begin(), found.end(), [](const Cluster& a, const Cluster& b) { return a.x > b.x; });
    for (double c : faint) {
      const auto below = std::find_if(found.begin(), found.end(), [c](const Cluster& r) { return r.x < c; });
      if (below == found.begin() || below == found.end()) continue;
      const auto above = below - 1;
      if (above->mult != 1 || below->mult != 1) continue;
      if (above->x - below->x > 1e-6 * std::max(1.0, std::abs(c))) continue;
      *above = {c, 2};
      found.erase(below);
    }
  }

  int total = 0;
  for (const Cluster& r : found) total += r.mult;
  if (total != k) {
    throw Error(Errc::NotRealRooted, "found " + std::to_string(total) +
                                         " real roots for degree " + std::to_string(k));
  }
  return merge_clusters(std::move(found), opts.cluster_tol);
}

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

Wide wide_abs(Wide x) { return x < 0 ? -x : x; }

// Newton in quad precision on the unnormalized coefficients. Clustered
// simple roots can have |p'| near 1e-10, where double evaluation of p is
// pure noise; the extra bits make the roots' symmetric functions match the
// stored coefficients.
void polish_simple_roots(const std::vector<double>& c, std::size_t zeros, std::vector<Cluster>& clusters) {
  std::vector<Wide> g(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const auto eval = [&g](Wide x, Wide& d) {
    Wide v = 0;
    d = 0;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      d = d * x + v;
      v = v * x + *it;
    }
    return v;
  };
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].mult != 1) continue;
    const bool has_hi = i > 0;
    const bool has_lo = i + 1 < clusters.size();
    const Wide hi = has_hi ? Wide(clusters[i - 1].x) : Wide(0);
    const Wide lo = has_lo ? Wide(clusters[i + 1].x) : Wide(0);
    Wide x = clusters[i].x;
    Wide d = 0;
    Wide fx = wide_abs(eval(x, d));
    for (int it = 0; it < 40 && fx > 0; ++it) {
      const Wide v = eval(x, d);
      if (d == 0) break;
      const Wide nx = x - v / d;
      if ((has_hi && !(nx < hi)) || (has_lo && !(nx > lo))) break;
      Wide dd = 0;
      const Wide fn = wide_abs(eval(nx, dd));
      if (!(fn < fx)) break;
      x = nx;
      fx = fn;
    }
    clusters[i].x = static_cast<double>(x);
  }
}

}  // namespace

RootVector roots(const UniPoly& p, const RootOptions& opts) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "roots of the zero polynomial");
  const auto& c = p.coeffs();
  std::size_t zeros = 0;
  while (zeros < c.size() && c[zeros] == 0.0) ++zeros;
  std::vector<double> f(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const double lead = f.back();
  for (double& a : f) a /= lead;
  const int k = static_cast<int>(f.size()) - 1;

  std::vector<Cluster> clusters;
  if (k >= 1) {
    // Monic derivatives f^(j) / (k!/(k-j)!) for j = k-1 .. 0.
    std::vector<std::vector<double>> chain(static_cast<std::size_t>(k));
    chain[0] = f;
    for (int j = 1; j < k; ++j) {
      const auto& prev = chain[static_cast<std::size_t>(j - 1)];
      std::vector<double> d(prev.size() - 1);
      const double deg = static_cast<double>(prev.size() - 1);
      for (std::size_t i = 1; i < prev.size(); ++i) d[i - 1] = prev[i] * static_cast<double>(i) / deg;
      chain[static_cast<std::size_t>(j)] = std::move(d);
    }
    const auto& lin = chain[static_cast<std::size_t>(k - 1)];
    clusters.push_back({-lin[0] / lin[1], 1});
    for (int j = k - 2; j >= 0; --j) {
      clusters = roots_from_critical(chain[static_cast<std::size_t>(j)], clusters, opts);
    }
  }
  polish_simple_roots(c, zeros, clusters);
  if (zeros > 0) {
    clusters.push_back({0.0, static_cast<int>(zeros)});
    clusters = merge_clusters(std::move(clusters), opts.cluster_tol);
  }
  RootVector out;
  out.reserve(static_cast<std::size_t>(p.degree()));
  for (const Cluster& cl : clusters) out.insert(out.end(), static_cast<std::size_t>(cl.mult), cl.x);
  return out;
}

bool is_real_rooted(const UniPoly& p, const RootOptions& opts) {
  if (p.is_zero()) return true;
  try {
    roots(p, opts);
    return true;
  } catch (const Error& e) {
    if (e.code() == Errc::NotRealRooted) return false;
    throw;
  }
}

double maxroot(const UniPoly& p, const RootOptions& opts) {
  const RootVector r = roots(p, opts);
  return r.empty() ? -std::numeric_limits<double>::infinity() : r.front();
}

double min_root(const UniPoly& p, const RootOptions& opts) {
  const RootVector r = roots(p, opts);
  return r.empty() ? std::numeric_limits<double>::infinity() : r.back();
}

double max_abs_root(const UniPoly& p, const RootOptions& opts) {
  const RootVector r = roots(p, opts);
  return r.empty() ? 0.0 : std::max(std::abs(r.front()), std::abs(r.back()));
}

ComplexRoots companion_roots(const UniPoly& p) {
  if (p.is_zero()) throw Error(Errc::ZeroPolynomial, "roots of the zero polynomial");
  ComplexRoots out;
  const auto& c = p.coeffs();
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) {
    out.re.push_back(0.0);
    out.im.push_back(0.0);
  }
  const int k = p.degree() - static_cast<int>(zeros);
  if (k == 0) return out;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) comp(i, k - 1) = -c[zeros + static_cast<std::size_t>(i)] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const auto ev = es.eigenvalues();
  for (int i = 0; i < k; ++i) {
    out.re.push_back(ev(i).real());
    out.im.push_back(ev(i).imag());
  }
  return out;
}

double companion_maxroot(const UniPoly& p, double imag_tol) {
  const ComplexRoots cr = companion_roots(p);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cr.re.size(); ++i) {
    if (std::abs(cr.im[i]) <= imag_tol * std::max(1.0, std::abs(cr.re[i]))) {
      best = std::max(best, cr.re[i]);
    }
  }
  return best;
}

namespace {

bool alternates(const RootVector& top, const RootVector& other, double tol) {
  // top_1 >= other_1 >= top_2 >= other_2 >= ...
  std::vector<double> merged;
  const std::size_t m = std::max(top.size(), other.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (i < top.size()) merged.push_back(top[i]);
    if (i < other.size()) merged.push_back(other[i]);
  }
  for (std::size_t i = 1; i < merged.size(); ++i) {
    const double scale = std::max(1.0, std::abs(merged[i]));
    if (merged[i] > merged[i - 1] + tol * scale) return false;
  }
  return true;
}

}  // namespace

bool interlaces(const UniPoly& q, const UniPoly& p, double tol) {
  if (q.is_zero() || p.is_zero()) return true;
  const int dq = q.degree();
  const int dp = p.degree();
  if (std::abs(dq - dp) > 1) {
    throw Error(Errc::DegreeMismatch, "degrees " + std::to_string(dq) + " and " +
                                          std::to_string(dp) + " differ by more than one");
  }
  if (dq == dp + 1) return false;
  const RootVector a = roots(q);
  const RootVector b = roots(p);
  if (dq == dp - 1) return alternates(b, a, tol);
  return alternates(b, a, tol) || alternates(a, b, tol);
}

namespace {

std::vector<double> wronskian_grid(const UniPoly& q, const UniPoly& p) {
  std::vector<double> pts;
  if (p.degree() >= 1) {
    const RootVector r = roots(p);
    pts.insert(pts.end(), r.begin(), r.end());
  }
  if (q.degree() >= 1) {
    const RootVector r = roots(q);
    pts.insert(pts.end(), r.begin(), r.end());
  }
  if (pts.empty()) return {0.0};
  std::sort(pts.begin(), pts.end());
  const double spread = pts.back() - pts.front();
  std::vector<double> grid = pts;
  for (std::size_t i = 1; i < pts.size(); ++i) grid.push_back(0.5 * (pts[i] + pts[i - 1]));
  grid.push_back(pts.front() - 1.0 - spread);
  grid.push_back(pts.back() + 1.0 + spread);
  return grid;
}

}  // namespace

double wronskian_max(const UniPoly& q, const UniPoly& p) {
  if (q.is_zero() || p.is_zero()) return 0.0;
  const UniPoly dp = p.derivative();
  const UniPoly dq = q.derivative();
  const std::vector<double> grid = wronskian_grid(q, p);
  std::vector<std::pair<double, double>> terms;
  terms.reserve(grid.size());
  double scale = 0.0;
  for (double x : grid) {
    terms.emplace_back(p(x) * dq(x), dp(x) * q(x));
    scale = std::max(scale, std::abs(terms.back().first) + std::abs(terms.back().second));
  }
  // Near a common root both products are rounding noise; skip those points.
  const double floor = 1e-9 * scale;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : terms) {
    const double den = std::abs(a) + std::abs(b);
    if (den <= floor || den == 0.0) continue;
    worst = std::max(worst, (a - b) / den);
  }
  return std::isinf(worst) ? 0.0 : worst;
}

bool proper_position(const UniPoly& q, const UniPoly& p, double tol) {
  if (q.is_zero() || p.is_zero()) return true;
  if (std::abs(q.degree() - p.degree()) > 1) return false;
  if (q.degree() == p.degree() + 1) {
    if (!interlaces(p, q, tol)) return false;
  } else if (!interlaces(q, p, tol)) {
    return false;
  }
  return wronskian_max(q, p) <= tol;
}

bool common_interlacer_probe(const std::vector<UniPoly>& ps, int trials,
                             std::uint64_t seed, const RootOptions& opts) {
  if (ps.size() <= 1) return true;
  const int d = ps.front().degree();
  for (const UniPoly& p : ps) {
    if (p.degree() != d) throw Error(Errc::DegreeMismatch, "probe needs equal degrees");
    if (p.leading() <= 0) throw Error(Errc::InvalidInput, "probe needs positive leading coefficients");
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(ps.size());
  for (int t = 0; t < trials; ++t) {
    double tot = 0.0;
    for (double& x : w) tot += (x = expo(rng));
    UniPoly mix;
    for (std::size_t i = 0; i < ps.size(); ++i) mix += ps[i] * (w[i] / tot);
    if (!is_real_rooted(mix, opts)) return false;
  }
  return true;
}

namespace {

void check_majorization_args(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "lengths " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()));
  }
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  double mag = 1.0;
  for (double x : a) mag = std::max(mag, std::abs(x));
  if (std::abs(sa - sb) > tol * mag * std::max<std::size_t>(1, a.size())) {
    std::ostringstream os;
    os.precision(17);
    os << "sums " << sa << " and " << sb;
    throw Error(Errc::SumMismatch, os.str());
  }
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

bool majorizes(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  check_majorization_args(a, b, tol);
  return majorization_margin(a, b) >= -tol * std::max<std::size_t>(1, a.size());
}

double majorization_margin(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "lengths " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()));
  }
  if (a.size() <= 1) return 0.0;
  const std::vector<double> sa = sorted_desc(a);
  const std::vector<double> sb = sorted_desc(b);
  double pa = 0.0;
  double pb = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < sa.size(); ++k) {
    pa += sa[k];
    pb += sb[k];
    margin = std::min(margin, pa - pb);
  }
  return margin;
}

}  // namespace rr
}  // namespace srpave
