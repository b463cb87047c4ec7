#pragma once

// Independent reference computations used only by the tests. Each one
// takes a different route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/poly1d.hpp"

namespace oracle {

using srpave::Mask;

/// Leibniz expansion over all permutations; fine up to n = 8.
inline double leibniz_det(const srpave::linalg::Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
      }
    }
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= a(i, perm[static_cast<std::size_t>(i)]);
    total += (inversions % 2 == 0) ? prod : -prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Evaluates a multi-affine polynomial term by term.
inline double eval_terms(const srpave::MultiAffine& p, const std::vector<double>& x) {
  double total = 0.0;
  for (Mask s = 0; s < p.size(); ++s) {
    double m = p.coeff(s);
    for (int i = 0; i < p.num_vars(); ++i) {
      if (srpave::contains(s, i)) m *= x[static_cast<std::size_t>(i)];
    }
    total += m;
  }
  return total;
}

/// det(Z - K) evaluated directly at a point.
inline double char_poly_at(const srpave::linalg::Matrix& k, const std::vector<double>& z) {
  srpave::linalg::Matrix m = -k;
  for (int i = 0; i < k.rows(); ++i) m(i, i) += z[static_cast<std::size_t>(i)];
  return m.determinant();
}

/// Random orthogonal V diag(lambda) V^T with lambda uniform in [lo, hi].
inline srpave::linalg::Matrix random_psd(int n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(lo, hi);
  srpave::linalg::Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<srpave::linalg::Matrix> qr(a);
  const srpave::linalg::Matrix q = qr.householderQ();
  srpave::linalg::Vector lam(n);
  for (int i = 0; i < n; ++i) lam(i) = u(rng);
  srpave::linalg::Matrix k = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (k + k.transpose());
}

inline std::vector<double> random_roots(int d, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> r(static_cast<std::size_t>(d));
  for (double& x : r) x = u(rng);
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

}  // namespace oracle
