#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "srpave/multi_affine.hpp"
#include "srpave/multi_degree.hpp"
#include "srpave/rr_univariate.hpp"
#include "srpave/sr_process.hpp"

namespace srpave::hyp {

/// A MultiDegree polynomial whose nonzero terms all have total degree d.
class HomogeneousPoly {
 public:
  /// Throws InvalidInput when some nonzero coefficient has another degree.
  HomogeneousPoly(MultiDegree p, int degree);

  const MultiDegree& poly() const { return p_; }
  int degree() const { return d_; }
  int num_vars() const { return p_.num_vars(); }
  double eval(const std::vector<double>& x) const { return p_.eval(x); }
  /// t -> p(t e + a)
  UniPoly section(const std::vector<double>& e, const std::vector<double>& a) const;

 private:
  MultiDegree p_;
  int d_;
};

/// p_H(z, w) = w^d p(z / w) with d the total degree of p; the new variable
/// is last.
HomogeneousPoly homogenize(const MultiDegree& p);
HomogeneousPoly homogenize(const MultiAffine& p);
/// Sets the last variable to 1 and drops it.
MultiDegree dehomogenize(const HomogeneousPoly& h);

struct HyperbolicityVerdict {
  bool falsified = false;
  bool positive_at_e = false;
  std::vector<double> offset;  // alpha of the failing section, if any
};

/// Falsifier for hyperbolicity in direction e: checks p(e) > 0, then the
/// real-rootedness of t -> p(t e + alpha) for alpha = 0 and trials random
/// Gaussian alpha. A section counts as not real-rooted only when the
/// derivative-chain finder fails and the companion roots carry an imaginary
/// part above 1e-7. Throws InvalidInput when p(e) = 0.
HyperbolicityVerdict hyperbolicity_probe(const HomogeneousPoly& p, const std::vector<double>& e, int trials,
                                         std::uint64_t seed);

/// Roots of t -> p(t e + alpha), non-increasing. These are the plain roots:
/// with F from f_construction, lambda at (0, -p, 0) is p sorted down.
/// Throws NotRealRooted.
std::vector<double> lambda_at(const HomogeneousPoly& p, const std::vector<double>& e,
                              const std::vector<double>& alpha);

/// x in C_e(p): every root of t -> p(x + t e) is below -tol.
bool cone_membership(const HomogeneousPoly& p, const std::vector<double>& e, const std::vector<double>& x,
                     double tol = 1e-10);

/// lambda_{v+u}(p) is majorized by lambda_v(p) + lambda_u(p).
bool hyperbolic_majorization_check(const HomogeneousPoly& p, const std::vector<double>& e,
                                   const std::vector<double>& v, const std::vector<double>& u,
                                   double tol = 1e-9);

struct FConstruction {
  HomogeneousPoly f{MultiDegree(), 0};  // variables z_1..z_n, u_1..u_n, w
  std::vector<double> e;                 // (1, ..., 1, 0, ..., 0, 0)
  std::vector<double> lambda_g;          // roots of diag(g), g(z) = xi(z - p)
  std::vector<double> lambda_xi;         // roots of diag(xi)
  std::vector<double> p_down;            // p, non-increasing
  double specialization_error = 0.0;     // worst of the three comparisons
  bool majorized = false;                // lambda_g is majorized by lambda_xi + p_down
  double margin = 0.0;
};

/// F(z, u, w) = sum_A (sum_{B <= A} b_B w^{|B|} u^{A \ B}) z^{A^c} for
/// xi = sum_A b_A z^{A^c}. Checks the sections at (0, -p, 1), (0, 0, 1) and
/// (0, -p, 0) against lambda_g, lambda_xi and p_down; throws
/// SpecializationMismatch when one is off by more than tol.
FConstruction f_construction(const MultiAffine& xi, const std::vector<double>& p, double tol = 1e-8);
/// Same, from a process: xi is its centred kernel and lambda_g is read off
/// kernel_poly directly.
FConstruction f_construction(const sr::PointProcess& x, double tol = 1e-8);

// ---- regions above the roots ----------------------------------------------

struct LemmaSweep {
  int tested = 0;
  int skipped = 0;  // samples whose precondition could not be arranged
  int failed = 0;
  bool ok() const { return failed == 0; }
};

/// u in Ab_p, v >= 0 and p(u - t v) != 0 on [0, 1] imply u - v in Ab_p.
LemmaSweep ab_convexity_test(const MultiAffine& p, int samples, std::uint64_t seed);

/// Walks from a point of Ab_p towards its boundary along random directions.
/// Points strictly before the exit must be in Ab_p whenever p does not vanish
/// there, and p must vanish at the exit point.
LemmaSweep boundary_lemma_test(const MultiAffine& p, int samples, std::uint64_t seed);

/// Over random x, membership in C_{(e1, 0)}(p_H) and C_{(e2, 0)}(p_H) agree
/// for random positive e1, e2. Samples within 1e-7 of either boundary are
/// skipped.
LemmaSweep cone_direction_invariance(const MultiAffine& p, int samples, std::uint64_t seed);

/// A real stable multi-affine polynomial with positive top-degree part:
/// det(Z - K) for symmetric K, a product of linear factors, the kernel of a
/// random strongly Rayleigh process, or a derivative / specialization of one
/// of these on n + 1 variables.
MultiAffine random_stable(int n, std::mt19937_64& rng);

/// e_k(z_1, ..., z_n), hyperbolic in direction 1.
HomogeneousPoly elementary_symmetric(int n, int k);

}  // namespace srpave::hyp
