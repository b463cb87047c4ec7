#include "srpave/sr_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srpave/rr_univariate.hpp"
#include "srpave/stable_poly.hpp"

namespace srpave::sr {

namespace {

// t[S] <- sum_{A >= S} t[A]
void superset_sum(std::vector<double>& t, int n) {
  for (int i = 0; i < n; ++i) {
    const Mask b = bit(i);
    for (Mask s = 0; s < t.size(); ++s) {
      if (!(s & b)) t[s] += t[s | b];
    }
  }
}

// Inverse of superset_sum.
void superset_mobius(std::vector<double>& t, int n) {
  for (int i = 0; i < n; ++i) {
    const Mask b = bit(i);
    for (Mask s = 0; s < t.size(); ++s) {
      if (!(s & b)) t[s] -= t[s | b];
    }
  }
}

double sign_of(Mask a) { return popcount(a) % 2 == 0 ? 1.0 : -1.0; }

// Clears Moebius rounding noise before the pmf reaches the validating
// constructor.
std::vector<double> clamp_noise(std::vector<double> pmf, double tol) {
  for (double& p : pmf) {
    if (p < 0.0 && p > -tol) p = 0.0;
  }
  return pmf;
}

std::vector<double> clamped_roots(const UniPoly& d) {
  auto roots = rr::roots(d);
  for (double& x : roots) x = std::clamp(x, 0.0, 1.0);
  return roots;
}

}  // namespace

PointProcess::PointProcess(int n, std::vector<double> pmf) : n_(n), pmf_(std::move(pmf)) {
  if (n < 0 || n > kMaxMultiAffineVars) throw Error(Errc::InvalidPMF, "ground set size out of range");
  if (pmf_.size() != (std::size_t{1} << n)) throw Error(Errc::InvalidPMF, "pmf must have 2^n entries");
  double total = 0.0;
  for (double& p : pmf_) {
    if (!std::isfinite(p) || p < -1e-12) throw Error(Errc::InvalidPMF, "negative or non-finite probability");
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTol) throw Error(Errc::InvalidPMF, "probabilities do not sum to 1");
}

// ---- polynomial views ------------------------------------------------------

MultiAffine generating_poly(const PointProcess& x) { return MultiAffine(x.n(), x.pmf()); }

std::vector<double> inclusion_table(const PointProcess& x) {
  std::vector<double> t = x.pmf();
  superset_sum(t, x.n());
  return t;
}

double inclusion_prob(const PointProcess& x, Mask a) {
  check_mask(a, x.n());
  double total = 0.0;
  for (Mask b = 0; b < x.pmf().size(); ++b) {
    if (is_subset(a, b)) total += x.prob(b);
  }
  return total;
}

std::vector<double> marginals(const PointProcess& x) {
  std::vector<double> p(static_cast<std::size_t>(x.n()), 0.0);
  for (Mask s = 0; s < x.pmf().size(); ++s) {
    for (int i = 0; i < x.n(); ++i) {
      if (contains(s, i)) p[static_cast<std::size_t>(i)] += x.prob(s);
    }
  }
  return p;
}

MultiAffine kernel_poly(const PointProcess& x) {
  const int n = x.n();
  const auto inc = inclusion_table(x);
  MultiAffine g(n);
  for (Mask a = 0; a < inc.size(); ++a) g.set_coeff(complement(a, n), sign_of(a) * inc[a]);
  return g;
}

namespace {

std::vector<double> reconstructed_mass(const MultiAffine& g) {
  std::vector<double> t(g.size());
  for (Mask a = 0; a < t.size(); ++a) t[a] = sign_of(a) * g.kernel_coeff(a);
  superset_mobius(t, g.num_vars());
  return t;
}

bool diagonal_roots_in_unit(const MultiAffine& g, double tol) {
  try {
    const auto roots = rr::roots(g.diagonalize());
    return roots.empty() || (roots.front() <= 1.0 + tol && roots.back() >= -tol);
  } catch (const Error& e) {
    if (e.code() != Errc::NotRealRooted && e.code() != Errc::ZeroPolynomial) throw;
    return false;
  }
}

}  // namespace

KernelVerdict kernel_validity(const MultiAffine& g, double tol, int falsifier_trials, std::uint64_t seed) {
  KernelVerdict v;
  v.top_ok = std::abs(g.top_coeff() - 1.0) <= tol;
  v.roots_ok = v.top_ok && diagonal_roots_in_unit(g, tol);
  const auto mass = reconstructed_mass(g);
  v.mass_ok = std::all_of(mass.begin(), mass.end(), [](double b) { return b >= -kMassTol; }) &&
              std::abs(std::accumulate(mass.begin(), mass.end(), 0.0) - 1.0) <= tol;
  v.stable_ok = !stable::stability_falsifier(g, falsifier_trials, seed).falsified;
  return v;
}

PointProcess process_from_kernel(const MultiAffine& g, double tol) {
  if (std::abs(g.top_coeff() - 1.0) > tol) throw Error(Errc::NotAValidKernel, "top coefficient is not 1");
  if (!diagonal_roots_in_unit(g, tol)) throw Error(Errc::NotAValidKernel, "diagonal roots outside [0, 1]");
  auto mass = reconstructed_mass(g);
  for (double b : mass) {
    if (b < -kMassTol) throw Error(Errc::NotAValidKernel, "reconstructed probability is negative");
  }
  return PointProcess(g.num_vars(), clamp_noise(std::move(mass), kMassTol));
}

std::vector<double> kernel_spectrum(const MultiAffine& g) { return clamped_roots(g.diagonalize()); }

namespace {

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

// diag g(t) = sum_k P(|X| = k) (t-1)^k t^(n-k). In this form the
// coefficients are non-negative masses, so roots near 1 keep full accuracy
// where the monomial coefficients lose up to 1e-7 and merge close pairs.
class SizeForm {
 public:
  explicit SizeForm(const std::vector<double>& sizes) : q_(sizes), n_(static_cast<int>(sizes.size()) - 1) {}

  Wide eval(Wide t, Wide& d) const {
    std::vector<Wide> pa(static_cast<std::size_t>(n_) + 1), pb(pa.size());
    pa[0] = pb[0] = 1;
    for (std::size_t k = 1; k < pa.size(); ++k) {
      pa[k] = pa[k - 1] * (t - 1);
      pb[k] = pb[k - 1] * t;
    }
    Wide v = 0;
    d = 0;
    for (int k = 0; k <= n_; ++k) {
      const Wide q = q_[static_cast<std::size_t>(k)];
      if (q == 0) continue;
      const auto uk = static_cast<std::size_t>(k), rk = static_cast<std::size_t>(n_ - k);
      v += q * pa[uk] * pb[rk];
      if (k > 0) d += q * k * pa[uk - 1] * pb[rk];
      if (k < n_) d += q * (n_ - k) * pa[uk] * pb[rk - 1];
    }
    return v;
  }

  // Coefficients of s^0..s^m in the expansion at t = c.
  std::vector<Wide> taylor(Wide c, int m) const {
    const auto mm = static_cast<std::size_t>(m) + 1;
    std::vector<Wide> out(mm, 0);
    for (int k = 0; k <= n_; ++k) {
      const Wide q = q_[static_cast<std::size_t>(k)];
      if (q == 0) continue;
      const std::vector<Wide> a = binomial(c - 1, k, m), b = binomial(c, n_ - k, m);
      for (std::size_t i = 0; i < mm; ++i) {
        for (std::size_t j = 0; i + j < mm; ++j) out[i + j] += q * a[i] * b[j];
      }
    }
    return out;
  }

 private:
  // (x + s)^k truncated after s^m
  static std::vector<Wide> binomial(Wide x, int k, int m) {
    std::vector<Wide> c(static_cast<std::size_t>(m) + 1, 0);
    Wide choose = 1;
    for (int j = 0; j <= std::min(k, m); ++j) {
      Wide pw = 1;
      for (int e = 0; e < k - j; ++e) pw *= x;
      c[static_cast<std::size_t>(j)] = choose * pw;
      choose = choose * (k - j) / (j + 1);
    }
    return c;
  }

  std::vector<double> q_;
  int n_;
};

Wide wide_abs(Wide x) { return x < 0 ? -x : x; }

// Splits a cluster of m equal roots at c when the local expansion has m
// distinct real roots; otherwise leaves it. Returns offsets from c.
std::vector<double> split_cluster(const SizeForm& h, double c, int m) {
  const std::vector<Wide> a = h.taylor(c, m);
  if (a[static_cast<std::size_t>(m)] == 0) return {};
  std::vector<double> off;
  if (m == 2) {
    const Wide disc = a[1] * a[1] - 4 * a[0] * a[2];
    if (!(disc > 0)) return {};
    // Wide has no portable sqrt; refine the double one by Newton.
    Wide x = std::sqrt(static_cast<double>(disc));
    for (int it = 0; it < 6; ++it) x = 0.5 * (x + disc / x);
    const Wide big = -(a[1] + (a[1] >= 0 ? x : -x)) / (2 * a[2]);
    if (big == 0) return {};
    off = {static_cast<double>(big), static_cast<double>(a[0] / (a[2] * big))};
  } else {
    // Scale s so the coefficients are comparable, then use the double finder.
    const double scale =
        std::pow(static_cast<double>(wide_abs(a[0] / a[static_cast<std::size_t>(m)])), 1.0 / m);
    if (!(scale > 0.0)) return {};
    std::vector<double> c(a.size());
    Wide pw = 1;
    for (std::size_t j = 0; j < a.size(); ++j, pw *= scale) c[j] = static_cast<double>(a[j] * pw / a.back());
    try {
      const auto r = rr::roots(UniPoly(c));
      if (static_cast<int>(r.size()) != m) return {};
      for (std::size_t j = 1; j < r.size(); ++j) {
        if (r[j] == r[j - 1]) return {};
      }
      for (double x : r) off.push_back(x * scale);
    } catch (const Error&) {
      return {};
    }
  }
  std::sort(off.rbegin(), off.rend());
  return off;
}

void polish_spectrum(std::vector<double>& lambda, const std::vector<double>& sizes) {
  const SizeForm h(sizes);
  constexpr double kGap = 1e-7;
  std::vector<double> out;
  for (std::size_t i = 0; i < lambda.size();) {
    std::size_t j = i + 1;
    while (j < lambda.size() && lambda[j - 1] - lambda[j] < kGap) ++j;
    const int m = static_cast<int>(j - i);
    const double c = lambda[i];
    const std::vector<double> off = m >= 2 ? split_cluster(h, c, m) : std::vector<double>{0.0};
    if (off.empty()) {
      out.insert(out.end(), lambda.begin() + static_cast<std::ptrdiff_t>(i),
                 lambda.begin() + static_cast<std::ptrdiff_t>(j));
    } else {
      for (double o : off) out.push_back(c + o);
    }
    i = j;
  }
  std::vector<bool> single(out.size(), true);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i] == out[i + 1]) single[i] = single[i + 1] = false;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!single[i]) continue;
    const Wide hi = i > 0 ? 0.5 * (Wide(out[i - 1]) + out[i]) : Wide(2.0);
    const Wide lo = i + 1 < out.size() ? 0.5 * (Wide(out[i + 1]) + out[i]) : Wide(-1.0);
    Wide d = 0, x = out[i];
    Wide best = wide_abs(h.eval(x, d));
    for (int it = 0; it < 40 && best != 0; ++it) {
      const Wide v = h.eval(x, d);
      if (d == 0) break;
      const Wide next = x - v / d;
      if (!(next > lo && next < hi)) break;
      const Wide fv = wide_abs(h.eval(next, d));
      if (fv > best) break;
      const bool done = wide_abs(next - x) <= wide_abs(next) * Wide(1e-30);
      best = fv;
      x = next;
      if (done) break;
    }
    out[i] = static_cast<double>(x);
  }
  std::sort(out.rbegin(), out.rend());
  for (double& x : out) x = std::clamp(x, 0.0, 1.0);
  lambda = std::move(out);
}

}  // namespace

std::vector<double> kernel_spectrum(const PointProcess& x) {
  std::vector<double> lambda = kernel_spectrum(kernel_poly(x));
  polish_spectrum(lambda, size_distribution(x));
  return lambda;
}

// ---- restriction and conditioning -----------------------------------------

PointProcess restrict_process(const PointProcess& x, Mask keep) {
  check_mask(keep, x.n());
  std::vector<double> pmf(std::size_t{1} << popcount(keep), 0.0);
  for (Mask s = 0; s < x.pmf().size(); ++s) pmf[compress_bits(s & keep, keep)] += x.prob(s);
  return PointProcess(popcount(keep), std::move(pmf));
}

MultiAffine restriction_kernel(const MultiAffine& g, Mask a) {
  return g.partial(a).compress(complement(a, g.num_vars()));
}

PointProcess condition(const PointProcess& x, int i, bool present) {
  const int n = x.n();
  if (i < 0 || i >= n) throw Error(Errc::DimensionMismatch, "conditioning index out of range");
  const Mask keep = complement(bit(i), n);
  std::vector<double> pmf(std::size_t{1} << (n - 1), 0.0);
  double total = 0.0;
  for (Mask s = 0; s < x.pmf().size(); ++s) {
    if (contains(s, i) != present) continue;
    pmf[compress_bits(s & keep, keep)] += x.prob(s);
    total += x.prob(s);
  }
  if (!(total > 0.0)) throw Error(Errc::ZeroProbabilityEvent, "conditioning on an event of probability 0");
  for (double& p : pmf) p /= total;
  return PointProcess(n - 1, std::move(pmf));
}

// ---- size law and entropy --------------------------------------------------

std::vector<double> size_distribution(const PointProcess& x) {
  std::vector<double> d(static_cast<std::size_t>(x.n()) + 1, 0.0);
  for (Mask s = 0; s < x.pmf().size(); ++s) d[static_cast<std::size_t>(popcount(s))] += x.prob(s);
  return d;
}

std::vector<double> bernoulli_convolution(const std::vector<double>& lambda) {
  std::vector<double> d{1.0};
  for (double l : lambda) {
    if (!(l >= 0.0 && l <= 1.0)) throw Error(Errc::ParamOutOfRange, "Bernoulli parameter outside [0, 1]");
    std::vector<double> next(d.size() + 1, 0.0);
    for (std::size_t k = 0; k < d.size(); ++k) {
      next[k] += d[k] * (1.0 - l);
      next[k + 1] += d[k] * l;
    }
    d = std::move(next);
  }
  return d;
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const PointProcess& x) { return entropy(x.pmf()); }

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::ParamOutOfRange, "probability outside [0, 1]");
  return entropy(std::vector<double>{p, 1.0 - p});
}

EntropyBound entropy_lower_bound_check(const PointProcess& x, double tol) {
  EntropyBound out;
  out.entropy = entropy(x);
  for (double l : kernel_spectrum(x)) out.spectral_sum += binary_entropy(l);
  out.holds = out.entropy >= out.spectral_sum - tol;
  return out;
}

AuxEntropyReport aux_entropy_checks(const PointProcess& x, double tol) {
  const int n = x.n();
  const auto inc = inclusion_table(x);
  AuxEntropyReport out;
  out.entropy = entropy(x);
  for (int i = 0; i < n; ++i) out.half_marginal_entropy += 0.5 * binary_entropy(std::clamp(inc[bit(i)], 0.0, 1.0));
  out.half_sum_holds = out.half_marginal_entropy <= out.entropy + tol;
  out.min_covariance_row = n == 0 ? 0.0 : INFINITY;
  for (int i = 0; i < n; ++i) {
    const double pi = inc[bit(i)];
    double row = pi * (1.0 - pi);
    for (int j = 0; j < n; ++j) {
      if (j != i) row += inc[bit(i) | bit(j)] - pi * inc[bit(j)];
    }
    out.min_covariance_row = std::min(out.min_covariance_row, row);
  }
  out.covariance_holds = out.min_covariance_row >= -tol;
  return out;
}

std::vector<double> independent_pmf(const std::vector<double>& lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> pmf(std::size_t{1} << n, 1.0);
  for (Mask s = 0; s < pmf.size(); ++s) {
    for (int i = 0; i < n; ++i) {
      const double l = lambda[static_cast<std::size_t>(i)];
      pmf[s] *= contains(s, i) ? l : 1.0 - l;
    }
  }
  return pmf;
}

MajorizationReport majorization_conjecture_check(const PointProcess& x, double tol) {
  const auto ind = independent_pmf(kernel_spectrum(x));
  MajorizationReport out;
  out.margin = rr::majorization_margin(ind, x.pmf());
  out.majorizes = out.margin >= -tol;
  return out;
}

// ---- determinantal processes ----------------------------------------------

PointProcess determinantal_process(const linalg::Matrix& k) {
  if (k.rows() != k.cols() || !linalg::is_psd_contraction(k)) {
    throw Error(Errc::NotPSDContraction, "kernel matrix must be a symmetric PSD contraction");
  }
  const int n = static_cast<int>(k.rows());
  auto t = linalg::principal_minors(k);
  superset_mobius(t, n);
  return PointProcess(n, clamp_noise(std::move(t), 1e-9));
}

MixtureReport hkpv_mixture_check(const linalg::Matrix& k, double tol) {
  const PointProcess target = determinantal_process(k);
  const int n = target.n();
  Eigen::SelfAdjointEigenSolver<linalg::Matrix> eig(k);
  const linalg::Vector lam = eig.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  const linalg::Matrix& v = eig.eigenvectors();
  std::vector<double> mix(target.pmf().size(), 0.0);
  MixtureReport out;
  for (Mask sel = 0; sel < mix.size(); ++sel) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) w *= contains(sel, i) ? lam(i) : 1.0 - lam(i);
    if (w <= 1e-12) continue;
    ++out.terms;
    linalg::Matrix proj = linalg::Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (contains(sel, i)) proj += v.col(i) * v.col(i).transpose();
    }
    const auto minors = linalg::principal_minors(proj);
    const int size = popcount(sel);
    for (Mask b = 0; b < mix.size(); ++b) {
      if (popcount(b) == size) mix[b] += w * minors[b];
    }
  }
  for (Mask b = 0; b < mix.size(); ++b) out.max_error = std::max(out.max_error, std::abs(mix[b] - target.prob(b)));
  out.ok = out.max_error <= tol;
  return out;
}

// ---- centred kernel and paving -------------------------------------------

MultiAffine centered_kernel(const PointProcess& x, double tol) {
  const int n = x.n();
  const MultiAffine xi = kernel_poly(x).shifted(marginals(x));
  if (std::abs(xi.kernel_coeff(0) - 1.0) > tol) throw Error(Errc::CenteringFailed, "top coefficient is not 1");
  for (int i = 0; i < n; ++i) {
    if (std::abs(xi.kernel_coeff(bit(i))) > tol) {
      throw Error(Errc::CenteringFailed, "first-order coefficient " + std::to_string(i) + " does not vanish");
    }
  }
  try {
    if (rr::max_abs_root(xi.diagonalize()) > 1.0 + tol) {
      throw Error(Errc::CenteringFailed, "diagonal roots outside [-1, 1]");
    }
  } catch (const Error& e) {
    if (e.code() != Errc::NotRealRooted) throw;
    throw Error(Errc::CenteringFailed, "diagonal is not real-rooted");
  }
  return xi;
}

double epsilon_for_delta(double delta) {
  if (!(delta > 0.0)) throw Error(Errc::ParamOutOfRange, "delta must be positive");
  if (delta >= 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) <= delta ? lo : hi) = mid;
  }
  return lo;
}

int r_for_delta(double delta) {
  const double eps = epsilon_for_delta(delta);
  auto ok = [&](long long r) { return paving::zero_diag_bound(static_cast<int>(r), 1.0) <= eps; };
  long long hi = 4;
  while (!ok(hi)) {
    hi *= 2;
    if (hi > (1LL << 30)) throw Error(Errc::ParamOutOfRange, "delta too small for an int-sized r");
  }
  if (hi == 4) return 4;
  long long lo = hi / 2;
  while (hi - lo > 1) {
    const long long mid = (lo + hi) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return static_cast<int>(hi);
}

SrPavingReport sr_paving(const PointProcess& x, int r) {
  const MultiAffine xi = centered_kernel(x);
  SrPavingReport out;
  out.paving = paving::two_stage_paving(xi, r, 1.0);
  out.epsilon = paving::zero_diag_bound(r, 1.0);
  const auto p = marginals(x);
  for (Mask s : out.paving.partition.parts) {
    // The restricted process's own centred kernel, not the paving's polynomial.
    const PointProcess part = restrict_process(x, s);
    out.per_part_rootnorm.push_back(rr::max_abs_root(centered_kernel(part).diagonalize()));
    double indep = 0.0;
    for (int j : to_indices(s)) indep += binary_entropy(std::clamp(p[static_cast<std::size_t>(j)], 0.0, 1.0));
    const double size = static_cast<double>(popcount(s));
    out.entropy_gaps.push_back(std::abs(entropy(part) / size - indep / size));
  }
  return out;
}

// ---- generators ------------------------------------------------------------

PointProcess independent(const std::vector<double>& p) {
  for (double q : p) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::InvalidPMF, "marginal outside [0, 1]");
  }
  return PointProcess(static_cast<int>(p.size()), independent_pmf(p));
}

PointProcess external_field(const PointProcess& x, const std::vector<double>& w) {
  if (w.size() != static_cast<std::size_t>(x.n())) throw Error(Errc::InvalidWeights, "one weight per point");
  for (double wi : w) {
    if (!(wi > 0.0) || !std::isfinite(wi)) throw Error(Errc::InvalidWeights, "weights must be positive");
  }
  std::vector<double> pmf = x.pmf();
  double total = 0.0;
  for (Mask s = 0; s < pmf.size(); ++s) {
    for (int i = 0; i < x.n(); ++i) {
      if (contains(s, i)) pmf[s] *= w[static_cast<std::size_t>(i)];
    }
    total += pmf[s];
  }
  for (double& q : pmf) q /= total;
  return PointProcess(x.n(), std::move(pmf));
}

PointProcess condition_chain(const PointProcess& x, std::vector<std::pair<int, bool>> events) {
  std::vector<int> label(static_cast<std::size_t>(x.n()));
  std::iota(label.begin(), label.end(), 0);
  PointProcess cur = x;
  for (const auto& [elem, present] : events) {
    const auto it = std::find(label.begin(), label.end(), elem);
    if (it == label.end()) throw Error(Errc::InvalidInput, "element already conditioned on or out of range");
    cur = condition(cur, static_cast<int>(it - label.begin()), present);
    label.erase(it);
  }
  return cur;
}

PointProcess product(const PointProcess& x, const PointProcess& y) {
  std::vector<double> pmf(std::size_t{1} << (x.n() + y.n()));
  for (Mask t = 0; t < y.pmf().size(); ++t) {
    for (Mask s = 0; s < x.pmf().size(); ++s) pmf[s | (t << x.n())] = x.prob(s) * y.prob(t);
  }
  return PointProcess(x.n() + y.n(), std::move(pmf));
}

Graph complete_graph(int k) {
  Graph g;
  g.vertices = k;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) g.edges.emplace_back(a, b);
  }
  return g;
}

Graph cycle_graph(int k) {
  Graph g;
  g.vertices = k;
  for (int a = 0; a < k; ++a) g.edges.emplace_back(a, (a + 1) % k);
  return g;
}

namespace {

bool is_spanning_tree(const Graph& g, Mask edges) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertices));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (int e : to_indices(edges)) {
    const int a = find(g.edges[static_cast<std::size_t>(e)].first);
    const int b = find(g.edges[static_cast<std::size_t>(e)].second);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;  // V-1 acyclic edges span
}

std::vector<Mask> spanning_trees(const Graph& g) {
  const int m = static_cast<int>(g.edges.size());
  if (m > kMaxMultiAffineVars) throw Error(Errc::BudgetExceeded, "too many edges to enumerate");
  if (g.vertices < 1) throw Error(Errc::InvalidInput, "graph needs a vertex");
  for (const auto& [a, b] : g.edges) {
    if (a < 0 || b < 0 || a >= g.vertices || b >= g.vertices) throw Error(Errc::InvalidInput, "edge endpoint out of range");
  }
  std::vector<Mask> out;
  for (Mask s = 0; s < (Mask{1} << m); ++s) {
    if (popcount(s) == g.vertices - 1 && is_spanning_tree(g, s)) out.push_back(s);
  }
  return out;
}

}  // namespace

long long count_spanning_trees(const Graph& g) { return static_cast<long long>(spanning_trees(g).size()); }

PointProcess ust_edges(const Graph& g) {
  const auto trees = spanning_trees(g);
  if (trees.empty()) throw Error(Errc::InvalidInput, "graph is not connected");
  std::vector<double> pmf(std::size_t{1} << g.edges.size(), 0.0);
  for (Mask t : trees) pmf[t] = 1.0 / static_cast<double>(trees.size());
  return PointProcess(static_cast<int>(g.edges.size()), std::move(pmf));
}

linalg::Matrix random_contraction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  linalg::Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
  }
  const linalg::Matrix q = Eigen::HouseholderQR<linalg::Matrix>(a).householderQ();
  linalg::Vector lam(n);
  for (int i = 0; i < n; ++i) lam(i) = unif(rng);
  const linalg::Matrix k = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (k + k.transpose());
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Independent: return "independent";
    case Family::Determinantal: return "determinantal";
    case Family::Conditioned: return "conditioned";
    case Family::Field: return "field";
    case Family::SpanningTree: return "ust";
  }
  return "unknown";
}

namespace {

linalg::Matrix random_kernel(int n, std::mt19937_64& rng) {
  linalg::Matrix k = random_contraction(n, rng);
  // One instance in four is a projection, whose diagonal has repeated roots 0 and 1.
  if (rng() % 4 == 0 && n > 0) {
    Eigen::SelfAdjointEigenSolver<linalg::Matrix> eig(k);
    linalg::Vector lam(n);
    const int rank = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
    for (int i = 0; i < n; ++i) lam(i) = i < rank ? 1.0 : 0.0;
    k = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    k = 0.5 * (k + k.transpose());
  }
  return k;
}

Graph random_connected_graph(int max_edges, std::mt19937_64& rng) {
  const int v = std::clamp(max_edges / 2 + 2, 2, max_edges + 1);
  Graph g;
  g.vertices = v;
  std::vector<std::pair<int, int>> all;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b) all.emplace_back(a, b);
  }
  // Random tree by attaching each vertex to an earlier one, then extra edges.
  for (int b = 1; b < v; ++b) {
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(b));
    g.edges.emplace_back(a, b);
  }
  std::shuffle(all.begin(), all.end(), rng);
  for (const auto& e : all) {
    if (static_cast<int>(g.edges.size()) >= max_edges) break;
    if (std::find(g.edges.begin(), g.edges.end(), e) == g.edges.end()) g.edges.push_back(e);
  }
  return g;
}

}  // namespace

PointProcess random_process(Family f, int n, std::mt19937_64& rng) {
  if (n < 1) throw Error(Errc::ParamOutOfRange, "need at least one point");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (f) {
    case Family::Independent: {
      std::vector<double> p(static_cast<std::size_t>(n));
      for (double& q : p) q = unif(rng);
      return independent(p);
    }
    case Family::Determinantal:
      return determinantal_process(random_kernel(n, rng));
    case Family::Conditioned: {
      const int extra = 2;
      PointProcess base = determinantal_process(random_contraction(n + extra, rng));
      std::vector<std::pair<int, bool>> events;
      std::vector<double> p = marginals(base);
      for (int e = 0; e < extra; ++e) {
        const int i = n + e;
        bool present = rng() % 2 == 0;
        if (p[static_cast<std::size_t>(i)] < 1e-6) present = false;
        if (p[static_cast<std::size_t>(i)] > 1.0 - 1e-6) present = true;
        events.emplace_back(i, present);
      }
      return condition_chain(base, events);
    }
    case Family::Field: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& wi : w) wi = std::exp(gauss(rng));
      return external_field(determinantal_process(random_kernel(n, rng)), w);
    }
    case Family::SpanningTree:
      return ust_edges(random_connected_graph(n, rng));
  }
  throw Error(Errc::InvalidInput, "unknown family");
}

}  // namespace srpave::sr
