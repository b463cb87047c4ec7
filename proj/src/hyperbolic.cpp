#include "srpave/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "srpave/linalg.hpp"
#include "srpave/paving.hpp"
#include "srpave/stable_poly.hpp"

namespace srpave::hyp {

namespace {

std::vector<double> descending_roots(const UniPoly& s) {
  rr::RootVector r = rr::roots(s);
  std::vector<double> out(r.begin(), r.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Section that is not real-rooted by both the derivative chain and the
// companion matrix.
bool clearly_complex(const UniPoly& s) {
  if (rr::is_real_rooted(s)) return false;
  const rr::ComplexRoots c = rr::companion_roots(s);
  for (std::size_t i = 0; i < c.im.size(); ++i) {
    if (std::abs(c.im[i]) > 1e-7 * std::max(1.0, std::abs(c.re[i]))) return true;
  }
  return false;
}

// Largest root of a section that may have lost degree; -inf when constant.
double section_maxroot(const UniPoly& s) {
  const UniPoly t = stable::trim_relative(s);
  if (t.is_zero()) return std::numeric_limits<double>::infinity();
  if (t.degree() < 1) return -std::numeric_limits<double>::infinity();
  return rr::maxroot(t);
}

// |p| at u relative to the sum of the term magnitudes there.
double relative_value(const MultiAffine& p, const std::vector<double>& u) {
  std::vector<double> au(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) au[i] = std::abs(u[i]);
  MultiAffine ap = p;
  for (double& c : ap.mutable_coeffs()) c = std::abs(c);
  const double scale = ap.eval(au);
  return scale == 0.0 ? 0.0 : std::abs(p.eval(u)) / scale;
}

// A point of Ab_p: b 1 plus a positive jitter, with b above maxroot(diag p).
std::vector<double> point_above(const MultiAffine& p, std::mt19937_64& rng) {
  const int n = p.num_vars();
  const double b = rr::maxroot(stable::trim_relative(p.diagonalize()));
  std::exponential_distribution<double> expo(2.0);
  std::vector<double> u(static_cast<std::size_t>(n));
  for (double& x : u) x = b + 1e-3 + expo(rng);
  return u;
}

}  // namespace

HomogeneousPoly::HomogeneousPoly(MultiDegree p, int degree) : p_(std::move(p)), d_(degree) {
  if (d_ < 0) throw Error(Errc::InvalidInput, "negative homogeneity degree");
  if (!p_.is_homogeneous(d_)) {
    throw Error(Errc::InvalidInput, "polynomial is not homogeneous of degree " + std::to_string(d_));
  }
}

UniPoly HomogeneousPoly::section(const std::vector<double>& e, const std::vector<double>& a) const {
  return p_.section(e, a);
}

HomogeneousPoly homogenize(const MultiDegree& p) {
  const int d = std::max(p.total_degree(), 0);
  std::vector<int> caps = p.caps();
  caps.push_back(d);
  MultiDegree out(caps);
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p.coeff_at(idx) == 0.0) continue;
    std::vector<int> e = p.exponents(idx);
    e.push_back(d - p.total_degree_of(idx));
    out.set_coeff(e, p.coeff_at(idx));
  }
  return HomogeneousPoly(std::move(out), d);
}

HomogeneousPoly homogenize(const MultiAffine& p) { return homogenize(MultiDegree::from_multi_affine(p)); }

MultiDegree dehomogenize(const HomogeneousPoly& h) {
  const MultiDegree& p = h.poly();
  if (p.num_vars() == 0) return p;
  std::vector<int> caps = p.caps();
  caps.pop_back();
  MultiDegree out(caps);
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p.coeff_at(idx) == 0.0) continue;
    std::vector<int> e = p.exponents(idx);
    e.pop_back();
    out.add_coeff(e, p.coeff_at(idx));
  }
  return out;
}

HyperbolicityVerdict hyperbolicity_probe(const HomogeneousPoly& p, const std::vector<double>& e, int trials,
                                         std::uint64_t seed) {
  HyperbolicityVerdict out;
  const double pe = p.eval(e);
  if (pe == 0.0) throw Error(Errc::InvalidInput, "probe direction is a zero of p");
  out.positive_at_e = pe > 0.0;
  if (!out.positive_at_e) {
    out.falsified = true;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> alpha(e.size(), 0.0);
  for (int t = 0; t <= trials; ++t) {
    if (t > 0) {
      for (double& a : alpha) a = gauss(rng);
    }
    if (clearly_complex(p.section(e, alpha))) {
      out.falsified = true;
      out.offset = alpha;
      return out;
    }
  }
  return out;
}

std::vector<double> lambda_at(const HomogeneousPoly& p, const std::vector<double>& e,
                              const std::vector<double>& alpha) {
  return descending_roots(p.section(e, alpha));
}

bool cone_membership(const HomogeneousPoly& p, const std::vector<double>& e, const std::vector<double>& x,
                     double tol) {
  return section_maxroot(p.section(e, x)) < -tol;
}

bool hyperbolic_majorization_check(const HomogeneousPoly& p, const std::vector<double>& e,
                                   const std::vector<double>& v, const std::vector<double>& u, double tol) {
  if (v.size() != u.size()) throw Error(Errc::LengthMismatch, "v and u differ in length");
  std::vector<double> vu(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) vu[i] = v[i] + u[i];
  const std::vector<double> lv = lambda_at(p, e, v);
  const std::vector<double> lu = lambda_at(p, e, u);
  std::vector<double> sum(lv.size());
  for (std::size_t i = 0; i < lv.size(); ++i) sum[i] = lv[i] + lu[i];
  return rr::majorizes(sum, lambda_at(p, e, vu), tol);
}

namespace {

FConstruction build_f(const MultiAffine& xi, const std::vector<double>& p, std::vector<double> lambda_g,
                      double tol) {
  const int n = xi.num_vars();
  if (static_cast<int>(p.size()) != n) throw Error(Errc::LengthMismatch, "marginals and kernel differ in size");
  std::vector<int> caps(static_cast<std::size_t>(2 * n), 1);
  caps.push_back(n);
  MultiDegree f(caps);
  const Mask full = full_mask(n);
  std::vector<int> ex(caps.size(), 0);
  for (Mask a = 0; a <= full; ++a) {
    for (Mask b = a;; b = (b - 1) & a) {
      const double coef = xi.kernel_coeff(b);
      if (coef != 0.0) {
        for (int i = 0; i < n; ++i) {
          ex[static_cast<std::size_t>(i)] = contains(a, i) ? 0 : 1;
          ex[static_cast<std::size_t>(n + i)] = (contains(a, i) && !contains(b, i)) ? 1 : 0;
        }
        ex.back() = popcount(b);
        f.add_coeff(ex, coef);
      }
      if (b == 0) break;
    }
  }

  FConstruction out;
  out.f = HomogeneousPoly(std::move(f), n);
  out.e.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
  std::fill(out.e.begin(), out.e.begin() + n, 1.0);
  out.lambda_g = std::move(lambda_g);
  out.lambda_xi = descending_roots(xi.diagonalize());
  out.p_down = p;
  std::sort(out.p_down.begin(), out.p_down.end(), std::greater<>());

  std::vector<double> alpha(out.e.size(), 0.0);
  const auto sec_roots = [&](bool with_p, double w) {
    for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(n + i)] = with_p ? -p[static_cast<std::size_t>(i)] : 0.0;
    alpha.back() = w;
    return lambda_at(out.f, out.e, alpha);
  };
  const double e1 = max_abs_diff(sec_roots(true, 1.0), out.lambda_g);
  const double e2 = max_abs_diff(sec_roots(false, 1.0), out.lambda_xi);
  const double e3 = max_abs_diff(sec_roots(true, 0.0), out.p_down);
  out.specialization_error = std::max({e1, e2, e3});
  if (!(out.specialization_error <= tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "F sections off by " << e1 << " (g), " << e2 << " (xi), " << e3 << " (p)";
    throw Error(Errc::SpecializationMismatch, os.str());
  }

  std::vector<double> rhs(out.lambda_xi.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = out.lambda_xi[i] + out.p_down[i];
  out.majorized = rr::majorizes(rhs, out.lambda_g, tol);
  out.margin = rr::majorization_margin(rhs, out.lambda_g);
  return out;
}

}  // namespace

FConstruction f_construction(const MultiAffine& xi, const std::vector<double>& p, double tol) {
  std::vector<double> neg(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) neg[i] = -p[i];
  return build_f(xi, p, descending_roots(xi.shifted(neg).diagonalize()), tol);
}

FConstruction f_construction(const sr::PointProcess& x, double tol) {
  return build_f(sr::centered_kernel(x), sr::marginals(x), descending_roots(sr::kernel_poly(x).diagonalize()), tol);
}

// ---- regions above the roots ----------------------------------------------

LemmaSweep ab_convexity_test(const MultiAffine& p, int samples, std::uint64_t seed) {
  LemmaSweep out;
  const int n = p.num_vars();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> u = point_above(p, rng);
    // Pull u down towards the boundary while it stays above the roots.
    std::vector<double> pull(u.size());
    for (double& x : pull) x = std::abs(gauss(rng));
    double step = 1.0;
    for (int k = 0; k < 8 && s % 3 == 0; ++k, step *= 0.5) {
      std::vector<double> cand = u;
      for (std::size_t i = 0; i < u.size(); ++i) cand[i] -= step * pull[i];
      if (paving::is_above_roots(p, cand)) u = std::move(cand);
    }
    std::vector<double> v(static_cast<std::size_t>(n));
    const double scale = 0.1 + expo(rng);
    for (double& x : v) x = (rng() % 4 == 0) ? 0.0 : scale * expo(rng);
    if (s % 2 == 1) {
      for (double& x : v) x *= 0.1;
    }

    // p(u - t v) for t in [0, 1] is the section s -> p(u + s v) on [-1, 0].
    const UniPoly sec = stable::trim_relative(MultiDegree::from_multi_affine(p).section(v, u));
    bool clear = !sec.is_zero();
    if (clear && sec.degree() >= 1) {
      rr::RootVector r;
      try {
        r = rr::roots(sec);
      } catch (const Error& e) {
        if (e.code() != Errc::NotRealRooted) throw;
        clear = false;
      }
      for (double x : r) {
        if (x >= -1.0 - 1e-9 && x <= 1e-9) clear = false;
      }
    }
    if (!clear) {
      ++out.skipped;
      continue;
    }
    ++out.tested;
    std::vector<double> w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= v[i];
    if (!paving::is_above_roots(p, w)) ++out.failed;
  }
  return out;
}

LemmaSweep boundary_lemma_test(const MultiAffine& p, int samples, std::uint64_t seed) {
  LemmaSweep out;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> u0 = point_above(p, rng);
    std::vector<double> d(u0.size());
    for (double& x : d) x = expo(rng) + 0.5 * gauss(rng);
    const auto at = [&](double t) {
      std::vector<double> u = u0;
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= t * d[i];
      return u;
    };
    double hi = 1.0;
    while (paving::is_above_roots(p, at(hi)) && hi < 1e6) hi *= 2.0;
    if (paving::is_above_roots(p, at(hi))) {
      ++out.skipped;
      continue;
    }
    double lo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (paving::is_above_roots(p, at(mid)) ? lo : hi) = mid;
    }
    ++out.tested;
    // The exit point is in the closure but not in Ab_p, so p vanishes there:
    // t -> p(u0 - t d) is small at hi against its own coefficient scale.
    std::vector<double> neg(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
    const UniPoly sec = MultiDegree::from_multi_affine(p).section(neg, u0);
    double scale = 0.0;
    for (int k = sec.degree(); k >= 0; --k) scale = scale * hi + std::abs(sec.coeff(k));
    bool ok = std::abs(sec(hi)) <= 1e-6 * scale;
    // Interior samples of the segment: nonvanishing closure points.
    for (int k = 0; k < 4; ++k) {
      const std::vector<double> u = at(lo * unif(rng));
      if (relative_value(p, u) > 1e-9 && !paving::is_above_roots(p, u)) ok = false;
    }
    if (!ok) ++out.failed;
  }
  return out;
}

LemmaSweep cone_direction_invariance(const MultiAffine& p, int samples, std::uint64_t seed) {
  LemmaSweep out;
  const int n = p.num_vars();
  const HomogeneousPoly h = homogenize(p);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  const double b = rr::maxroot(stable::trim_relative(p.diagonalize()));
  const auto direction = [&] {
    std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = 0.05 + expo(rng);
    return e;
  };
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> e1 = direction();
    const std::vector<double> e2 = direction();
    std::vector<double> x(static_cast<std::size_t>(n + 1));
    const double c = b + unif(rng);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = c + 0.5 * gauss(rng);
    x.back() = 1.0;
    const double m1 = section_maxroot(h.section(e1, x));
    const double m2 = section_maxroot(h.section(e2, x));
    if (std::abs(m1) < 1e-7 || std::abs(m2) < 1e-7) {
      ++out.skipped;
      continue;
    }
    ++out.tested;
    if ((m1 < 0) != (m2 < 0)) ++out.failed;
  }
  return out;
}

MultiAffine random_stable(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const auto base = [&](int m) -> MultiAffine {
    switch (rng() % 4) {
      case 0: {
        linalg::Matrix k(m, m);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = gauss(rng);
        }
        return stable::char_poly_matrix(k);
      }
      case 1: {
        std::vector<double> roots(static_cast<std::size_t>(m));
        for (double& r : roots) r = gauss(rng);
        return MultiAffine::linear_product(roots);
      }
      case 2: {
        const auto f = static_cast<sr::Family>(rng() % 5);
        for (;;) {
          const sr::PointProcess x = sr::random_process(f, m, rng);
          if (x.n() == m) return sr::kernel_poly(x);
          if (f == sr::Family::SpanningTree) return sr::kernel_poly(sr::random_process(sr::Family::Determinantal, m, rng));
        }
      }
      default: {
        if (m < 2) return MultiAffine::linear_product({gauss(rng)});
        const int split = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m - 1));
        std::vector<double> roots(static_cast<std::size_t>(split));
        for (double& r : roots) r = gauss(rng);
        linalg::Matrix k = sr::random_contraction(m - split, rng);
        return MultiAffine::linear_product(roots).tensor(stable::char_poly_matrix(k * 2.0));
      }
    }
  };
  if (rng() % 3 != 0) return base(n);
  // One more variable, then remove it by differentiation or by a real
  // specialization that keeps the top coefficient positive.
  const MultiAffine q = base(n + 1);
  const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
  const Mask keep = complement(bit(i), n + 1);
  if (rng() % 2 == 0) return q.partial(bit(i)).compress(keep);
  const double lead = q.top_coeff();
  const double below = q.coeff(keep);
  const double beta = -below / lead + 0.1 + expo(rng);
  return q.restrict_var(i, beta).compress(keep);
}

HomogeneousPoly elementary_symmetric(int n, int k) {
  if (k < 0 || k > n) throw Error(Errc::ParamOutOfRange, "elementary symmetric degree out of range");
  MultiAffine e(n);
  for (Mask s = 0; s < e.size(); ++s) {
    if (popcount(s) == k) e.set_coeff(s, 1.0);
  }
  return HomogeneousPoly(MultiDegree::from_multi_affine(e), k);
}

}  // namespace srpave::hyp
