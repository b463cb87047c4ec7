#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/paving.hpp"

namespace srpave::sr {

inline constexpr double kMassTol = 1e-10;

/// Law of a random subset of {0..n-1}: pmf[A] = P(X = A), indexed by bitmask.
class PointProcess {
 public:
  PointProcess() : PointProcess(0, {1.0}) {}
  /// Entries above -1e-12 are clamped to 0; the total must be 1 within
  /// 1e-10. Throws InvalidPMF otherwise.
  PointProcess(int n, std::vector<double> pmf);

  int n() const { return n_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double prob(Mask a) const { return pmf_[a]; }

 private:
  int n_;
  std::vector<double> pmf_;
};

// ---- polynomial views ------------------------------------------------------

/// f(z) = sum_A P(X = A) z^A
MultiAffine generating_poly(const PointProcess& x);

/// P(A in X) for every A, by superset sums.
std::vector<double> inclusion_table(const PointProcess& x);
double inclusion_prob(const PointProcess& x, Mask a);
std::vector<double> marginals(const PointProcess& x);

/// g(z) = sum_A (-1)^{|A|} P(A in X) z^{A^c}, built from inclusion
/// probabilities.
MultiAffine kernel_poly(const PointProcess& x);

struct KernelVerdict {
  bool top_ok = false;     // [z_1...z_n] g = 1
  bool roots_ok = false;   // diag g real-rooted with roots in [0, 1]
  bool mass_ok = false;    // reconstructed pmf non-negative, total 1
  bool stable_ok = false;  // random-ray falsifier found nothing
  bool valid() const { return top_ok && roots_ok && mass_ok && stable_ok; }
};

/// Checks the kernel classification conditions on g.
KernelVerdict kernel_validity(const MultiAffine& g, double tol = 1e-9, int falsifier_trials = 64,
                              std::uint64_t seed = 1);

/// Inverse of kernel_poly: b_B = sum_{A >= B} (-1)^{|A \ B|} P(A in X).
/// Throws NotAValidKernel when the top coefficient or the diagonal roots are
/// off, or a reconstructed mass is below -1e-10.
PointProcess process_from_kernel(const MultiAffine& g, double tol = 1e-9);

/// Roots of diag(g_X), clamped into [0, 1], non-increasing.
std::vector<double> kernel_spectrum(const PointProcess& x);
std::vector<double> kernel_spectrum(const MultiAffine& g);

// ---- restriction and conditioning -----------------------------------------

/// Law of X cap S, re-indexed over the elements of S in increasing order.
PointProcess restrict_process(const PointProcess& x, Mask keep);
/// d^A g re-indexed over A^c: the kernel of X cap A^c.
MultiAffine restriction_kernel(const MultiAffine& g, Mask a);

/// Law of X minus {i} given i in X (present) or i not in X, on the other
/// n-1 points. Throws ZeroProbabilityEvent when the event has probability 0.
PointProcess condition(const PointProcess& x, int i, bool present);

// ---- size law and entropy --------------------------------------------------

/// P(|X| = k), k = 0..n.
std::vector<double> size_distribution(const PointProcess& x);
/// Law of I_1 + ... + I_n with independent I_i ~ Bernoulli(lambda_i).
std::vector<double> bernoulli_convolution(const std::vector<double>& lambda);

/// Base-2 entropy of a probability vector; 0 log 0 = 0.
double entropy(const std::vector<double>& probs);
double entropy(const PointProcess& x);
double binary_entropy(double p);

struct EntropyBound {
  double entropy = 0.0;
  double spectral_sum = 0.0;  // sum_i h(lambda_i)
  bool holds = false;         // entropy >= spectral_sum - tol
};
EntropyBound entropy_lower_bound_check(const PointProcess& x, double tol = 1e-9);

struct AuxEntropyReport {
  double entropy = 0.0;
  double half_marginal_entropy = 0.0;  // (1/2) sum_i H(X_i)
  bool half_sum_holds = false;
  /// min over i of var(X_i) + sum_{j != i} cov(X_i, X_j)
  double min_covariance_row = 0.0;
  bool covariance_holds = false;
};
AuxEntropyReport aux_entropy_checks(const PointProcess& x, double tol = 1e-9);

/// pmf of independent Bernoulli(lambda_i) coordinates.
std::vector<double> independent_pmf(const std::vector<double>& lambda);

struct MajorizationReport {
  bool majorizes = false;
  double margin = 0.0;  // min prefix-sum gap, negative on failure
};
/// Does the independent law with the kernel spectrum majorize the law of X?
MajorizationReport majorization_conjecture_check(const PointProcess& x, double tol = 1e-9);

// ---- determinantal processes ----------------------------------------------

/// P(X = A) = sum_{B >= A} (-1)^{|B \ A|} det K_B. Throws NotPSDContraction.
PointProcess determinantal_process(const linalg::Matrix& k);

struct MixtureReport {
  double max_error = 0.0;
  int terms = 0;  // mixture components with positive weight
  bool ok = false;
};
/// Rebuilds the determinantal law as the mixture over I of the projection
/// processes sum_{i in I} v_i v_i^T with weights lambda^I (1-lambda)^{I^c}.
MixtureReport hkpv_mixture_check(const linalg::Matrix& k, double tol = 1e-8);

// ---- centred kernel and paving -------------------------------------------

/// xi(z) = g_X(z + p) with p the marginals. Throws CenteringFailed unless the
/// top coefficient is 1, every first-order kernel coefficient vanishes and
/// the diagonal roots lie in [-1, 1], all to tol.
MultiAffine centered_kernel(const PointProcess& x, double tol = 1e-8);

/// Largest eps <= 1/2 with h(eps) <= delta, by bisection.
double epsilon_for_delta(double delta);
/// Smallest r >= 4 with zero_diag_bound(r, 1) <= epsilon_for_delta(delta).
int r_for_delta(double delta);

struct SrPavingReport {
  paving::PavingResult paving;          // two-stage result on xi with Lambda = 1
  std::vector<double> per_part_rootnorm;  // max |root| of the centred restricted kernel
  std::vector<double> entropy_gaps;       // |H(X cap S)/|S| - sum_{j in S} h(p_j)/|S||
  double epsilon = 0.0;                   // zero_diag_bound(r, 1)
};
SrPavingReport sr_paving(const PointProcess& x, int r);

// ---- generators ------------------------------------------------------------

/// Independent Bernoulli(p_i) coordinates.
PointProcess independent(const std::vector<double>& p);
/// P(X = A) proportional to w^A P(X = A). Throws InvalidWeights unless w > 0.
PointProcess external_field(const PointProcess& x, const std::vector<double>& w);
/// Conditions on each (element, present) event in turn; elements refer to the
/// original indexing and are removed from the ground set.
PointProcess condition_chain(const PointProcess& x, std::vector<std::pair<int, bool>> events);
/// Product of two processes on disjoint ground sets (x first).
PointProcess product(const PointProcess& x, const PointProcess& y);

struct Graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
};
Graph complete_graph(int k);
Graph cycle_graph(int k);
/// Edge set of a uniform spanning tree, by enumerating spanning trees.
PointProcess ust_edges(const Graph& g);
/// Number of spanning trees found by the same enumeration.
long long count_spanning_trees(const Graph& g);

/// Random PSD contraction with eigenvalues uniform in [0, 1].
linalg::Matrix random_contraction(int n, std::mt19937_64& rng);

enum class Family { Independent, Determinantal, Conditioned, Field, SpanningTree };
const char* to_string(Family f);
/// A random strongly Rayleigh process of the given family on about n points
/// (spanning-tree instances use the edges of a small random graph).
PointProcess random_process(Family f, int n, std::mt19937_64& rng);

}  // namespace srpave::sr
