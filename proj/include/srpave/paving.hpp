#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/multi_degree.hpp"
#include "srpave/rr_univariate.hpp"

namespace srpave::paving {

/// Ordered r-tuple of disjoint, possibly empty parts covering {0..n-1}.
struct Partition {
  std::vector<Mask> parts;

  int r() const { return static_cast<int>(parts.size()); }
  /// Throws InvalidInput when parts overlap or miss an index.
  void validate(int n) const;
  /// Part index holding element i, or -1.
  int part_of(int i) const;
};

std::string to_string(const Partition& s);

struct PavingParams {
  int r = 2;
  double alpha = 0.25;
  double lambda = 1.0;  // only used by the zero-diagonal variant
};

enum class Method { Exhaustive, Descent, TwoStage };
std::string to_string(Method m);

struct DescentNode {
  int level = 0;                       // k: elements 0..k-1 assigned
  double maxroot = 0.0;                // of the node polynomial
  std::vector<double> child_maxroots;  // all r children
  int chosen = -1;
  double sum_residual = 0.0;           // |node - sum of children| / scale
};

struct PavingResult {
  Method method = Method::Exhaustive;
  int r = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  Partition partition;
  /// maxroot of diag(d^{S_i^c} g) per part (-inf for empty parts); for the
  /// two-stage method this holds the largest absolute root instead.
  std::vector<double> per_part_maxroot;
  double bound = 0.0;
  bool certified = false;
  /// Descent only: maxroot(g_r) at the tree root.
  double reference_maxroot = std::numeric_limits<double>::quiet_NaN();
  std::vector<DescentNode> trace;
  /// Labels of the listed parts. Two-stage results list only non-empty
  /// parts, labelled i*r + j for second-stage part j of first-stage part i;
  /// num_parts is then r^2. Other methods list all r parts densely.
  std::vector<long long> part_labels;
  long long num_parts = 0;
  /// Two-stage only: the first-stage partition.
  Partition stage_one;
  double runtime_ms = 0.0;

  double max_part_value() const;
};

// ---- closed forms -------------------------------------------------------

/// (sqrt(1/r - alpha/(r-1)) + sqrt(alpha))^2 for r >= 2, 0 <= alpha <= (r-1)^2/r^2.
double lr_bound(int r, double alpha);
/// ((r-2)/(r(r-1)) + 2 sqrt((r-2)/(r(r-1)))) * Lambda for r >= 4, Lambda > 0.
double zero_diag_bound(int r, double lambda);
/// (sqrt(1/r) + sqrt(alpha))^2, the earlier matrix paving bound.
double mss_bound(int r, double alpha);

// ---- g_S and g_r ---------------------------------------------------------

inline constexpr double kEnumerationBudget = 1e6;

/// g_S = prod_i diag(d^{S_i^c} g)
template <class T>
BasicPoly<T> g_of_partition(const BasicMultiAffine<T>& g, const Partition& s) {
  const int n = g.num_vars();
  s.validate(n);
  BasicPoly<T> acc = BasicPoly<T>::constant(T(1));
  for (Mask part : s.parts) acc = acc * g.partial(complement(part, n)).diagonalize();
  return acc;
}

/// diag(d^{S^c} g) for every S, indexed by bitmask.
template <class T>
std::vector<BasicPoly<T>> part_polynomials(const BasicMultiAffine<T>& g) {
  const int n = g.num_vars();
  std::vector<BasicPoly<T>> out(g.size());
  for (Mask s = 0; s < g.size(); ++s) out[s] = g.partial(complement(s, n)).diagonalize();
  return out;
}

/// Sum of g_S over all r^n ordered partitions.
template <class T>
BasicPoly<T> g_r_bruteforce(const BasicMultiAffine<T>& g, int r) {
  const int n = g.num_vars();
  if (r < 1) throw Error(Errc::ParamOutOfRange, "r must be positive");
  if (std::pow(static_cast<double>(r), n) > kEnumerationBudget) {
    throw Error(Errc::BudgetExceeded, "r^n exceeds the enumeration budget");
  }
  const auto parts = part_polynomials(g);
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::vector<Mask> masks(static_cast<std::size_t>(r));
  BasicPoly<T> total;
  while (true) {
    std::fill(masks.begin(), masks.end(), Mask{0});
    for (int i = 0; i < n; ++i) masks[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])] |= bit(i);
    BasicPoly<T> term = BasicPoly<T>::constant(T(1));
    for (Mask m : masks) term = term * parts[m];
    total += term;
    int i = 0;
    while (i < n && ++label[static_cast<std::size_t>(i)] == r) label[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return total;
}

/// (1/(r-1)!)^n diag[(prod_i d_i^{r-1}) g^r]
template <class T>
BasicPoly<T> g_r_differential(const BasicMultiAffine<T>& g, int r) {
  const int n = g.num_vars();
  if (r < 1) throw Error(Errc::ParamOutOfRange, "r must be positive");
  BasicMultiDegree<T> p = power(BasicMultiDegree<T>::from_multi_affine(g), r);
  for (int i = 0; i < n; ++i) p = p.partial(i, r - 1);
  T fact(1);
  for (int k = 2; k < r; ++k) fact *= T(k);
  T scale(1);
  for (int i = 0; i < n; ++i) scale /= fact;
  return p.diagonalize() * scale;
}

// ---- interlacing family --------------------------------------------------

/// Node polynomial q_k for the partial assignment `assigned` of elements
/// 0..k-1 (parts may be empty): the r-fold product g(z_1)...g(z_r) in r*n
/// variables, hit by d_{z_j}^{[k] \ S_j} for every copy j and by
/// Delta_i = sum_j prod_{l != j} d_{z_l,i} for every unassigned i, then
/// diagonalized. Copy j, variable i sits at position j*n + i.
template <class T>
BasicPoly<T> node_polynomial(const BasicMultiAffine<T>& g, const Partition& assigned, int k) {
  const int n = g.num_vars();
  const int r = assigned.r();
  if (k < 0 || k > n) throw Error(Errc::InvalidInput, "node level out of range");
  if (r * n > kMaxMultiAffineVars) {
    throw Error(Errc::BudgetExceeded, "r*n = " + std::to_string(r * n) + " variables exceed the dense budget");
  }
  const Mask prefix = full_mask(k);
  Mask seen = 0;
  for (Mask s : assigned.parts) {
    if ((s & ~prefix) != 0 || (s & seen) != 0) throw Error(Errc::InvalidInput, "assignment is not a partition of the prefix");
    seen |= s;
  }
  if (seen != prefix) throw Error(Errc::InvalidInput, "assignment does not cover the prefix");

  BasicMultiAffine<T> prod = g;
  for (int j = 1; j < r; ++j) prod = prod.tensor(g);
  Mask assigned_diff = 0;
  for (int j = 0; j < r; ++j) {
    assigned_diff |= static_cast<Mask>(prefix & ~assigned.parts[static_cast<std::size_t>(j)]) << (j * n);
  }
  prod = prod.partial(assigned_diff);
  for (int i = k; i < n; ++i) {
    Mask all_copies = 0;
    for (int j = 0; j < r; ++j) all_copies |= bit(j * n + i);
    BasicMultiAffine<T> acc(r * n);
    for (int j = 0; j < r; ++j) acc += prod.partial(all_copies & ~bit(j * n + i));
    prod = std::move(acc);
  }
  return prod.diagonalize();
}

// ---- paving searches -----------------------------------------------------

/// Verifies the paving hypotheses: r >= 2, 0 < alpha <= (r-1)^2/r^2,
/// a_empty = 1, |a_{i}| <= alpha, diag roots in [0, 1]. Throws
/// HypothesisViolated listing every failed condition.
void check_paving_hypotheses(const MultiAffine& g, const PavingParams& params, double tol = rr::kDefaultTol);

/// Largest |a_{i}| over i, the smallest admissible alpha.
double diagonal_alpha(const MultiAffine& g);

/// Partition of {0..n-1} into r ordered, possibly empty parts minimizing the
/// largest value[S_i], where value is indexed by bitmask and value[0] is the
/// empty part's contribution. Exact subset dynamic programming.
Partition min_max_partition(const std::vector<double>& value, int n, int r);

inline constexpr double kDynamicProgramBudget = 2e8;

/// Exact minimizer of max_i maxroot(diag d^{S_i^c} g) over all ordered
/// r-partitions; certified when that minimum is <= lr_bound + 1e-8.
PavingResult exhaustive_paving(const MultiAffine& g, const PavingParams& params);

/// Walks the interlacing-family tree greedily from the root; every visited
/// node is checked against the sum of its children. Throws DescentStuck if
/// no child keeps the maxroot from increasing.
PavingResult interlacing_descent(const MultiAffine& g, const PavingParams& params, double tol = 1e-9);

/// Zero-diagonal paving into r^2 parts: shift-scale-pave, reflect each part,
/// pave again. Needs r >= 4, a_empty = 1, a_{i} = 0, diag roots in [-Lambda, Lambda].
PavingResult two_stage_paving(const MultiAffine& g, int r, double lambda, double tol = rr::kDefaultTol);

struct MatrixPavingReport {
  PavingResult result;
  std::vector<double> op_norms;  // ||K_{S_i}|| by eigenvalues, 0 for empty parts
  double max_norm_mismatch = 0.0;
};

/// Paves chi[K] for a PSD contraction K with diagonal entries <= alpha and
/// compares every part's maxroot with the operator norm of K_{S_i}.
MatrixPavingReport matrix_paving(const linalg::Matrix& k, const PavingParams& params);

// ---- barrier method ------------------------------------------------------

/// u is above the roots of p iff t -> p(u + t 1) has all roots < -1e-10.
bool is_above_roots(const MultiDegree& p, const std::vector<double>& u);
bool is_above_roots(const MultiAffine& p, const std::vector<double>& u);

/// d_i p / p at u. Throws PoleAtPoint when p(u) = 0.
double barrier_phi(const MultiDegree& p, int i, const std::vector<double>& u);

enum class BarrierMode {
  KernelPower,  // lambda_r taken as 0 (inputs of the form g^r and its derivatives)
  General,      // lambda_r from the univariate section through u
};

struct BarrierStepRecord {
  int j = 0;
  double delta = 0.0;
  double lambda_r = 0.0;
  double step_limit = 0.0;  // 1 / Phi^j of d_j^{r-1} p at u; delta must stay below it
  std::vector<double> phi_before;
  std::vector<double> phi_after;
};

struct BarrierState {
  MultiDegree p;
  std::vector<double> u;
  std::vector<BarrierStepRecord> history;
};

/// p = g^r, u = b 1. Throws NotAboveRoots when b 1 is not above the roots.
BarrierState barrier_start(const MultiAffine& g, int r, double b);

/// One move: delta = ((r-1)^2/r) / (Phi^j_p(u) - 1/(u_j - lambda_r)),
/// p <- d_j^{r-1} p, u <- u - delta e_j. Checks that the new point is above
/// the roots (NotAboveRoots) and that no barrier value grew
/// (MonotonicityViolated), both to relative tolerance tol.
BarrierState barrier_step(const BarrierState& state, int j, int r,
                          BarrierMode mode = BarrierMode::KernelPower, double tol = 1e-9);

struct BarrierOptions {
  int grid_points = 200;
  double b_max = 4.0;
  int refine_iters = 60;
  double tol = 1e-9;
  BarrierMode mode = BarrierMode::KernelPower;
  std::vector<int> order;  // empty: 0, 1, ..., n-1
};

struct BarrierRun {
  double b = 0.0;
  std::vector<double> deltas;
  double bound = 0.0;           // b - min_k delta_k
  double uniform_delta = 0.0;   // analytic lower bound on every delta_k
  double phi_upper = 0.0;       // r (alpha/(b-1) + (1-alpha)/b)
  bool phi_bound_holds = true;  // Phi^i_{g^r}(b 1) <= phi_upper for all i
  bool uniform_delta_holds = true;
  int steps_checked = 0;
};

/// Runs the n barrier steps from b 1 (alpha = diagonal_alpha(g)).
BarrierRun barrier_run(const MultiAffine& g, int r, double b, const BarrierOptions& opts = {});

struct CertifiedBound {
  double bound = 0.0;  // min over b of b - min_k delta_k
  double best_b = 0.0;
  double alpha = 0.0;
  int runs = 0;
  int steps_checked = 0;
  bool phi_bound_holds = true;
  bool uniform_delta_holds = true;
};

/// Minimizes the barrier bound over a logarithmic grid of b in (1, b_max]
/// followed by golden-section refinement around the best grid point.
CertifiedBound certified_maxroot_bound(const MultiAffine& g, int r, const BarrierOptions& opts = {});

}  // namespace srpave::paving
