#pragma once

#include <cstdint>
#include <vector>

#include "srpave/poly1d.hpp"

namespace srpave::rr {

inline constexpr double kDefaultTol = 1e-9;

/// Roots listed non-increasing, multiplicities by repetition.
using RootVector = std::vector<double>;

struct RootOptions {
  /// Distinct critical points closer than this are merged into one cluster.
  double cluster_tol = 1e-9;
  /// A critical point c counts as a root when |p(c)| <= residual_tol * sum |a_k||c|^k.
  double residual_tol = 1e-11;
};

/// All roots of a real-rooted polynomial. Throws ZeroPolynomial or
/// NotRealRooted (fewer real roots found than the degree).
///
/// Works down the derivative chain: the roots of p' bracket the roots of p,
/// and a critical point where p vanishes is a root of multiplicity one more
/// than its multiplicity in p'. This keeps the exact high-multiplicity roots
/// at 0 and 1 of projection kernels intact.
RootVector roots(const UniPoly& p, const RootOptions& opts = {});

bool is_real_rooted(const UniPoly& p, const RootOptions& opts = {});

/// A nonzero constant has no roots: maxroot is -inf, min_root is +inf,
/// max_abs_root is 0.
double maxroot(const UniPoly& p, const RootOptions& opts = {});
double min_root(const UniPoly& p, const RootOptions& opts = {});
double max_abs_root(const UniPoly& p, const RootOptions& opts = {});

/// Largest real root of any polynomial, found from the companion-matrix
/// eigenvalues; used where only the top root matters and real-rootedness
/// is not guaranteed (e.g. when probing along a ray).
double companion_maxroot(const UniPoly& p, double imag_tol = 1e-7);

/// Roots from companion eigenvalues; imag parts are returned separately.
struct ComplexRoots {
  std::vector<double> re;
  std::vector<double> im;
};
ComplexRoots companion_roots(const UniPoly& p);

/// True iff the roots of q and p alternate with p's root on top:
/// beta_1 >= alpha_1 >= beta_2 >= ... where beta = roots(p), alpha = roots(q).
/// The zero polynomial interlaces and is interlaced by everything.
/// Throws DegreeMismatch when the degrees differ by more than one.
bool interlaces(const UniPoly& q, const UniPoly& p, double tol = kDefaultTol);

/// q << p: q and p interlace (in either alternation pattern) and the
/// Wronskian p q' - p' q is <= 0 on a grid covering all roots.
bool proper_position(const UniPoly& q, const UniPoly& p, double tol = kDefaultTol);

/// Largest value of the normalized Wronskian (p q' - p' q) / (|p||q'| + |p'||q|)
/// over the same grid used by proper_position. Non-positive means proper position
/// as far as the Wronskian sign is concerned.
double wronskian_max(const UniPoly& q, const UniPoly& p);

/// Samples random convex combinations; false means some combination is not
/// real-rooted (no common interlacer exists). True only means not falsified.
bool common_interlacer_probe(const std::vector<UniPoly>& ps, int trials,
                             std::uint64_t seed, const RootOptions& opts = {});

/// a majorizes b: prefix sums of sorted-descending a dominate those of b and
/// totals agree. Throws LengthMismatch or SumMismatch.
bool majorizes(const std::vector<double>& a, const std::vector<double>& b,
               double tol = kDefaultTol);

/// Smallest prefix-sum gap sum_{k<=m} a_(k) - b_(k) over m < len, both sorted
/// descending; the final (total) gap is excluded. Empty input gives 0.
double majorization_margin(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace srpave::rr
