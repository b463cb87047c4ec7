#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/multi_degree.hpp"
#include "srpave/rr_univariate.hpp"

namespace srpave::stable {

/// chi[K](z) = det(Z - K), Z = diag(z). The coefficient of z^S is
/// (-1)^{n-|S|} det(K_{S^c}). Throws DimensionMismatch unless K is square
/// and symmetric to 1e-12.
MultiAffine char_poly_matrix(const linalg::Matrix& k);

/// Drops trailing coefficients below rel * (largest |coefficient|).
UniPoly trim_relative(const UniPoly& p, double rel = 1e-12);

/// The univariate section t -> p(t v + a).
UniPoly ray_section(const MultiAffine& p, const std::vector<double>& v, const std::vector<double>& a);

std::vector<Mask> support(const MultiAffine& p, double tol = 0.0);

/// For all A <= C <= B with A, B in supp(p), C is in supp(p).
bool support_convexity_check(const MultiAffine& p, double tol = 0.0);

/// (-1)^{n-|S|} [z^S] p >= -tol for every S. Returns nullopt when the
/// preconditions fail (top coefficient not positive, or the
/// diagonalization has a negative or non-real root).
std::optional<bool> coefficient_sign_check(const MultiAffine& p, double tol = rr::kDefaultTol);

struct StabilityVerdict {
  bool falsified = false;
  std::vector<double> direction;  // v (positive) when falsified
  std::vector<double> offset;     // alpha when falsified
};

/// Random rays t -> p(t v + alpha), v > 0: returns the first ray whose
/// section is not real-rooted. The first trial is always v = 1, alpha = 0.
StabilityVerdict stability_falsifier(const MultiAffine& p, int trials, std::uint64_t seed);
StabilityVerdict stability_falsifier(const MultiDegree& p, int trials, std::uint64_t seed);

/// Multi-affine p in two variables is real stable iff a11 a00 - a10 a01 <= 0.
bool bivariate_stability_exact(const MultiAffine& p, double tol = 0.0);

}  // namespace srpave::stable
