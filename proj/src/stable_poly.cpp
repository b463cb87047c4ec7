#include "srpave/stable_poly.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace srpave::stable {

MultiAffine char_poly_matrix(const linalg::Matrix& k) {
  if (k.rows() != k.cols()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  if (!linalg::is_symmetric(k)) throw Error(Errc::DimensionMismatch, "matrix is not symmetric");
  const int n = static_cast<int>(k.rows());
  const std::vector<double> minors = linalg::principal_minors(k);
  MultiAffine p(n);
  const Mask full = full_mask(n);
  for (Mask s = 0; s < p.size(); ++s) {
    const Mask rest = full & ~s;
    p.set_coeff(s, (popcount(rest) % 2 == 0) ? minors[rest] : -minors[rest]);
  }
  return p;
}

UniPoly trim_relative(const UniPoly& p, double rel) {
  std::vector<double> c = p.coeffs();
  const double m = max_abs_coeff(p);
  while (!c.empty() && std::abs(c.back()) <= rel * m) c.pop_back();
  return UniPoly(std::move(c));
}

UniPoly ray_section(const MultiAffine& p, const std::vector<double>& v, const std::vector<double>& a) {
  // Each factor (v_i t + a_i) is affine in t, so p(t v + a) collapses like a
  // diagonalization after the substitution z_i -> v_i z_i + a_i.
  return p.affine_sub(v, a).diagonalize();
}

std::vector<Mask> support(const MultiAffine& p, double tol) { return p.support(tol); }

bool support_convexity_check(const MultiAffine& p, double tol) {
  const int n = p.num_vars();
  const std::size_t size = p.size();
  std::vector<char> in(size), down(size), up(size);
  for (Mask s = 0; s < size; ++s) in[s] = std::abs(p.coeff(s)) > tol;
  down = in;
  up = in;
  for (int i = 0; i < n; ++i) {
    for (Mask s = 0; s < size; ++s) {
      if (contains(s, i)) down[s] = down[s] || down[s ^ bit(i)];
      else up[s] = up[s] || up[s | bit(i)];
    }
  }
  for (Mask s = 0; s < size; ++s) {
    if (!in[s] && down[s] && up[s]) return false;
  }
  return true;
}

std::optional<bool> coefficient_sign_check(const MultiAffine& p, double tol) {
  if (!(p.top_coeff() > 0)) return std::nullopt;
  try {
    const rr::RootVector r = rr::roots(p.diagonalize());
    if (!r.empty() && r.back() < -tol) return std::nullopt;
  } catch (const Error& e) {
    if (e.code() == Errc::NotRealRooted) return std::nullopt;
    throw;
  }
  const int n = p.num_vars();
  double scale = 0.0;
  for (double a : p.coeffs()) scale = std::max(scale, std::abs(a));
  for (Mask s = 0; s < p.size(); ++s) {
    const double signed_c = ((n - popcount(s)) % 2 == 0) ? p.coeff(s) : -p.coeff(s);
    if (signed_c < -tol * scale) return false;
  }
  return true;
}

namespace {

template <class Section>
StabilityVerdict falsify(int n, int trials, std::uint64_t seed, Section&& section) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n), 1.0);
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < trials; ++t) {
    if (t > 0) {
      for (double& x : v) x = 0.05 + expo(rng);
      for (double& x : a) x = gauss(rng);
    }
    const UniPoly s = trim_relative(section(v, a));
    if (s.is_zero()) continue;
    if (!rr::is_real_rooted(s)) return {true, v, a};
  }
  return {};
}

}  // namespace

StabilityVerdict stability_falsifier(const MultiAffine& p, int trials, std::uint64_t seed) {
  return falsify(p.num_vars(), trials, seed,
                 [&](const auto& v, const auto& a) { return ray_section(p, v, a); });
}

StabilityVerdict stability_falsifier(const MultiDegree& p, int trials, std::uint64_t seed) {
  return falsify(p.num_vars(), trials, seed,
                 [&](const auto& v, const auto& a) { return p.section(v, a); });
}

bool bivariate_stability_exact(const MultiAffine& p, double tol) {
  if (p.num_vars() != 2) {
    throw Error(Errc::WrongArity, "bivariate test needs n = 2, got " + std::to_string(p.num_vars()));
  }
  const double det = p.coeff(3) * p.coeff(0) - p.coeff(1) * p.coeff(2);
  return det <= tol;
}

}  // namespace srpave::stable
