#include "srpave/paving.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "srpave/stable_poly.hpp"

namespace srpave::paving {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double rel_tol(double tol, double x) { return tol * std::max(1.0, std::abs(x)); }

}  // namespace

void Partition::validate(int n) const {
  Mask seen = 0;
  for (Mask s : parts) {
    if ((s & ~full_mask(n)) != 0) throw Error(Errc::InvalidInput, "part has elements beyond n");
    if ((s & seen) != 0) throw Error(Errc::InvalidInput, "parts overlap");
    seen |= s;
  }
  if (seen != full_mask(n)) throw Error(Errc::InvalidInput, "parts do not cover the ground set");
}

int Partition::part_of(int i) const {
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (contains(parts[j], i)) return static_cast<int>(j);
  }
  return -1;
}

std::string to_string(const Partition& s) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < s.parts.size(); ++j) {
    if (j) os << ", ";
    os << "{";
    const auto idx = to_indices(s.parts[j]);
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
    os << "}";
  }
  os << ")";
  return os.str();
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Exhaustive: return "exhaustive";
    case Method::Descent: return "descent";
    case Method::TwoStage: return "two-stage";
  }
  return "unknown";
}

double PavingResult::max_part_value() const {
  double m = kNegInf;
  for (double v : per_part_maxroot) m = std::max(m, v);
  return m;
}

// ---- closed forms -------------------------------------------------------

double lr_bound(int r, double alpha) {
  if (r < 2) throw Error(Errc::ParamOutOfRange, "lr_bound needs r >= 2");
  const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
  if (!(alpha >= 0.0) || alpha > cap * (1 + 1e-12)) {
    throw Error(Errc::ParamOutOfRange, "alpha outside [0, (r-1)^2/r^2]");
  }
  const double a = std::max(0.0, 1.0 / r - alpha / (r - 1));
  const double s = std::sqrt(a) + std::sqrt(alpha);
  return s * s;
}

double zero_diag_bound(int r, double lambda) {
  if (r < 4) throw Error(Errc::ParamOutOfRange, "zero-diagonal paving needs r >= 4");
  if (!(lambda > 0.0)) throw Error(Errc::ParamOutOfRange, "Lambda must be positive");
  const double q = static_cast<double>(r - 2) / (static_cast<double>(r) * (r - 1));
  return (q + 2.0 * std::sqrt(q)) * lambda;
}

double mss_bound(int r, double alpha) {
  if (r < 1) throw Error(Errc::ParamOutOfRange, "r must be positive");
  if (!(alpha >= 0.0)) throw Error(Errc::ParamOutOfRange, "alpha must be non-negative");
  const double s = std::sqrt(1.0 / r) + std::sqrt(alpha);
  return s * s;
}

// ---- hypotheses and search ----------------------------------------------

double diagonal_alpha(const MultiAffine& g) {
  double a = 0.0;
  for (int i = 0; i < g.num_vars(); ++i) a = std::max(a, std::abs(g.kernel_coeff(bit(i))));
  return a;
}

void check_paving_hypotheses(const MultiAffine& g, const PavingParams& params, double tol) {
  std::vector<std::string> failed;
  if (params.r < 2) failed.push_back("r >= 2");
  const double cap = params.r >= 1 ? static_cast<double>((params.r - 1) * (params.r - 1)) / (params.r * params.r) : 0.0;
  if (!(params.alpha > 0.0) || params.alpha > cap + 1e-15) failed.push_back("0 < alpha <= (r-1)^2/r^2");
  if (std::abs(g.kernel_coeff(0) - 1.0) > tol) failed.push_back("a_empty = 1");
  for (int i = 0; i < g.num_vars(); ++i) {
    if (std::abs(g.kernel_coeff(bit(i))) > params.alpha + tol) {
      failed.push_back("|a_{" + std::to_string(i) + "}| <= alpha");
      break;
    }
  }
  try {
    const auto roots = rr::roots(g.diagonalize());
    if (!roots.empty() && (roots.front() > 1.0 + tol || roots.back() < -tol)) {
      failed.push_back("diagonal roots in [0, 1]");
    }
  } catch (const Error& e) {
    if (e.code() != Errc::NotRealRooted && e.code() != Errc::ZeroPolynomial) throw;
    failed.push_back("diagonal real-rooted");
  }
  if (!failed.empty()) {
    std::string msg = "failed:";
    for (const auto& f : failed) msg += " [" + f + "]";
    throw Error(Errc::HypothesisViolated, msg);
  }
}

Partition min_max_partition(const std::vector<double>& value, int n, int r) {
  if (value.size() != (std::size_t{1} << n)) throw Error(Errc::DimensionMismatch, "value table must have 2^n entries");
  if (r < 1) throw Error(Errc::ParamOutOfRange, "r must be positive");
  const int m = std::min(r, std::max(n, 1));
  if (m * std::pow(3.0, n) > kDynamicProgramBudget) {
    throw Error(Errc::BudgetExceeded, "subset dynamic program exceeds its budget");
  }
  const std::size_t size = value.size();
  // best[k][T]: optimum for T split into k+1 parts; pick[k][T]: the part
  // containing T's lowest element, or 0 when one of the parts is left empty.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(m), std::vector<double>(size));
  std::vector<std::vector<Mask>> pick(static_cast<std::size_t>(m), std::vector<Mask>(size, 0));
  for (Mask t = 0; t < size; ++t) {
    best[0][t] = value[t];
    pick[0][t] = t;
  }
  for (int k = 1; k < m; ++k) {
    auto& bk = best[static_cast<std::size_t>(k)];
    const auto& prev = best[static_cast<std::size_t>(k - 1)];
    auto& pk = pick[static_cast<std::size_t>(k)];
    for (Mask t = 0; t < size; ++t) {
      double b = std::max(value[0], prev[t]);
      Mask choice = 0;
      if (t != 0) {
        const Mask low = t & (~t + 1);
        const Mask rest = t & ~low;
        for (Mask sub = rest;; sub = (sub - 1) & rest) {
          const Mask s = sub | low;
          const double v = std::max(value[s], prev[t & ~s]);
          if (v < b) {
            b = v;
            choice = s;
          }
          if (sub == 0) break;
        }
      }
      bk[t] = b;
      pk[t] = choice;
    }
  }
  Partition out;
  Mask t = full_mask(n);
  for (int k = m - 1; k >= 0; --k) {
    const Mask s = pick[static_cast<std::size_t>(k)][t];
    out.parts.push_back(s);
    t &= ~s;
  }
  out.parts.resize(static_cast<std::size_t>(r), 0);
  return out;
}

namespace {

std::vector<double> part_maxroots(const MultiAffine& g) {
  const int n = g.num_vars();
  std::vector<double> v(g.size());
  for (Mask s = 0; s < g.size(); ++s) v[s] = rr::maxroot(g.partial(complement(s, n)).diagonalize());
  return v;
}

double part_maxroot(const MultiAffine& g, Mask s) {
  return rr::maxroot(g.partial(complement(s, g.num_vars())).diagonalize());
}

void dense_labels(PavingResult& res) {
  res.num_parts = static_cast<long long>(res.partition.parts.size());
  res.part_labels.resize(res.partition.parts.size());
  for (std::size_t j = 0; j < res.part_labels.size(); ++j) res.part_labels[j] = static_cast<long long>(j);
}

}  // namespace

PavingResult exhaustive_paving(const MultiAffine& g, const PavingParams& params) {
  const auto t0 = Clock::now();
  check_paving_hypotheses(g, params);
  const int n = g.num_vars();
  PavingResult res;
  res.method = Method::Exhaustive;
  res.r = params.r;
  res.alpha = params.alpha;
  res.partition = min_max_partition(part_maxroots(g), n, params.r);
  for (Mask s : res.partition.parts) res.per_part_maxroot.push_back(part_maxroot(g, s));
  res.bound = lr_bound(params.r, params.alpha);
  res.certified = res.max_part_value() <= res.bound + 1e-8;
  dense_labels(res);
  res.runtime_ms = elapsed_ms(t0);
  return res;
}

PavingResult interlacing_descent(const MultiAffine& g, const PavingParams& params, double tol) {
  const auto t0 = Clock::now();
  check_paving_hypotheses(g, params);
  const int n = g.num_vars();
  const int r = params.r;
  PavingResult res;
  res.method = Method::Descent;
  res.r = r;
  res.alpha = params.alpha;

  Partition node;
  node.parts.assign(static_cast<std::size_t>(r), 0);
  UniPoly q = node_polynomial(g, node, 0);
  double q_max = rr::maxroot(q);
  res.reference_maxroot = q_max;
  for (int k = 0; k < n; ++k) {
    DescentNode rec;
    rec.level = k;
    rec.maxroot = q_max;
    std::vector<UniPoly> children;
    UniPoly sum;
    for (int j = 0; j < r; ++j) {
      Partition child = node;
      child.parts[static_cast<std::size_t>(j)] |= bit(k);
      children.push_back(node_polynomial(g, child, k + 1));
      sum += children.back();
      rec.child_maxroots.push_back(rr::maxroot(children.back()));
    }
    rec.sum_residual = relative_coeff_distance(q, sum);
    int chosen = -1;
    for (int j = 0; j < r; ++j) {
      const double m = rec.child_maxroots[static_cast<std::size_t>(j)];
      if (m <= q_max + rel_tol(tol, q_max) &&
          (chosen < 0 || m < rec.child_maxroots[static_cast<std::size_t>(chosen)])) {
        chosen = j;
      }
    }
    rec.chosen = chosen;
    res.trace.push_back(rec);
    if (chosen < 0) {
      std::ostringstream os;
      os.precision(17);
      os << "no child at level " << k + 1 << " has maxroot <= " << q_max;
      throw Error(Errc::DescentStuck, os.str());
    }
    node.parts[static_cast<std::size_t>(chosen)] |= bit(k);
    q = children[static_cast<std::size_t>(chosen)];
    q_max = rec.child_maxroots[static_cast<std::size_t>(chosen)];
  }
  res.partition = node;
  for (Mask s : res.partition.parts) res.per_part_maxroot.push_back(part_maxroot(g, s));
  res.bound = lr_bound(r, params.alpha);
  res.certified = res.max_part_value() <= res.bound + 1e-8;
  dense_labels(res);
  res.runtime_ms = elapsed_ms(t0);
  return res;
}

namespace {

// One shift-and-pave stage on h (m variables, a_empty = 1, a_{i} = 0, diag
// roots in [-lambda, lambda]): f(z) = (2 lambda)^{-m} h(2 lambda z - lambda 1)
// has diag roots in [0, 1] and |a_{i}| = 1/2, so the paving theorem applies
// with alpha = 1/2.
Partition shift_pave(const MultiAffine& h, int r, double lambda) {
  const int m = h.num_vars();
  const double width = 2.0 * lambda;
  const std::vector<double> scale(static_cast<std::size_t>(m), width);
  const std::vector<double> shift(static_cast<std::size_t>(m), -lambda);
  MultiAffine f = h.affine_sub(scale, shift) * std::pow(width, -m);
  PavingParams p;
  p.r = r;
  p.alpha = lambda / width;
  return exhaustive_paving(f, p).partition;
}

}  // namespace

PavingResult two_stage_paving(const MultiAffine& g, int r, double lambda, double tol) {
  const auto t0 = Clock::now();
  if (r < 4) throw Error(Errc::ParamOutOfRange, "two-stage paving needs r >= 4");
  if (!(lambda > 0.0)) throw Error(Errc::ParamOutOfRange, "Lambda must be positive");
  const int n = g.num_vars();
  {
    std::vector<std::string> failed;
    if (std::abs(g.kernel_coeff(0) - 1.0) > tol) failed.push_back("a_empty = 1");
    for (int i = 0; i < n; ++i) {
      if (std::abs(g.kernel_coeff(bit(i))) > tol) {
        failed.push_back("a_{" + std::to_string(i) + "} = 0");
        break;
      }
    }
    try {
      const auto roots = rr::roots(g.diagonalize());
      if (!roots.empty() && (roots.front() > lambda + tol || roots.back() < -lambda - tol)) {
        failed.push_back("diagonal roots in [-Lambda, Lambda]");
      }
    } catch (const Error& e) {
      if (e.code() != Errc::NotRealRooted) throw;
      failed.push_back("diagonal real-rooted");
    }
    if (!failed.empty()) {
      std::string msg = "failed:";
      for (const auto& f : failed) msg += " [" + f + "]";
      throw Error(Errc::HypothesisViolated, msg);
    }
  }

  PavingResult res;
  res.method = Method::TwoStage;
  res.r = r;
  res.lambda = lambda;
  res.alpha = 0.0;
  res.bound = zero_diag_bound(r, lambda);
  res.num_parts = static_cast<long long>(r) * r;
  res.stage_one = shift_pave(g, r, lambda);
  for (int i = 0; i < r; ++i) {
    const Mask si = res.stage_one.parts[static_cast<std::size_t>(i)];
    if (si == 0) continue;
    // f_i(z) = (-1)^{|S_i|} d^{S_i^c} g(-z) in the variables of S_i.
    const MultiAffine fi = g.partial(complement(si, n)).compress(si).reflect();
    const Partition local = shift_pave(fi, r, lambda);
    for (int j = 0; j < r; ++j) {
      const Mask part = expand_bits(local.parts[static_cast<std::size_t>(j)], si);
      if (part == 0) continue;
      res.partition.parts.push_back(part);
      res.part_labels.push_back(static_cast<long long>(i) * r + j);
    }
  }
  res.partition.validate(n);
  for (Mask s : res.partition.parts) {
    res.per_part_maxroot.push_back(rr::max_abs_root(g.partial(complement(s, n)).diagonalize()));
  }
  res.certified = res.per_part_maxroot.empty() || res.max_part_value() <= res.bound + 1e-8;
  res.runtime_ms = elapsed_ms(t0);
  return res;
}

MatrixPavingReport matrix_paving(const linalg::Matrix& k, const PavingParams& params) {
  const MultiAffine chi = stable::char_poly_matrix(k);
  if (!linalg::is_psd_contraction(k)) throw Error(Errc::HypothesisViolated, "K is not a PSD contraction");
  for (int i = 0; i < k.rows(); ++i) {
    if (k(i, i) > params.alpha + 1e-12) {
      throw Error(Errc::HypothesisViolated, "diagonal entry " + std::to_string(i) + " exceeds alpha");
    }
  }
  MatrixPavingReport rep;
  rep.result = exhaustive_paving(chi, params);
  for (std::size_t j = 0; j < rep.result.partition.parts.size(); ++j) {
    const Mask s = rep.result.partition.parts[j];
    const double norm = linalg::symmetric_op_norm(linalg::principal_submatrix(k, s));
    rep.op_norms.push_back(norm);
    if (s != 0) {
      rep.max_norm_mismatch = std::max(rep.max_norm_mismatch, std::abs(norm - rep.result.per_part_maxroot[j]));
    }
  }
  return rep;
}

// ---- barrier method ------------------------------------------------------

namespace {

double ray_maxroot(const UniPoly& section) {
  const UniPoly s = stable::trim_relative(section);
  if (s.degree() < 1) return kNegInf;
  try {
    return rr::maxroot(s);
  } catch (const Error& e) {
    if (e.code() != Errc::NotRealRooted) throw;
    return rr::companion_maxroot(s);
  }
}

constexpr double kAboveRootsMargin = 1e-10;

}  // namespace

bool is_above_roots(const MultiDegree& p, const std::vector<double>& u) {
  const std::vector<double> ones(u.size(), 1.0);
  return ray_maxroot(p.section(ones, u)) < -kAboveRootsMargin;
}

bool is_above_roots(const MultiAffine& p, const std::vector<double>& u) {
  const std::vector<double> ones(u.size(), 1.0);
  return ray_maxroot(stable::ray_section(p, ones, u)) < -kAboveRootsMargin;
}

double barrier_phi(const MultiDegree& p, int i, const std::vector<double>& u) {
  const double pu = p.eval(u);
  if (pu == 0.0) throw Error(Errc::PoleAtPoint, "barrier function at a zero of p");
  return p.partial(i, 1).eval(u) / pu;
}

namespace {

std::vector<double> all_phi(const MultiDegree& p, const std::vector<double>& u) {
  const double pu = p.eval(u);
  if (pu == 0.0) throw Error(Errc::PoleAtPoint, "barrier function at a zero of p");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = p.partial(static_cast<int>(i), 1).eval(u) / pu;
  return out;
}

BarrierState step_with_phi(const BarrierState& state, int j, int r, BarrierMode mode, double tol,
                           std::vector<double> phi_before) {
  const MultiDegree& p = state.p;
  const std::vector<double>& u = state.u;
  const auto uj = static_cast<std::size_t>(j);
  BarrierStepRecord rec;
  rec.j = j;
  rec.phi_before = std::move(phi_before);

  double lambda_r = 0.0;
  if (mode == BarrierMode::General) {
    std::vector<double> e(u.size(), 0.0);
    e[uj] = 1.0;
    std::vector<double> base = u;
    base[uj] = 0.0;
    const UniPoly sec = stable::trim_relative(p.section(e, base));
    lambda_r = sec.degree() >= 1 ? rr::min_root(sec) : kNegInf;
  }
  rec.lambda_r = lambda_r;
  const double inv_gap = std::isinf(lambda_r) ? 0.0 : 1.0 / (u[uj] - lambda_r);
  const double denom = rec.phi_before[uj] - inv_gap;
  if (!(denom > 0.0)) throw Error(Errc::MonotonicityViolated, "non-positive step denominator");
  const double delta = (static_cast<double>((r - 1) * (r - 1)) / r) / denom;
  rec.delta = delta;

  BarrierState next;
  next.p = p.partial(j, r - 1);
  next.u = u;
  next.u[uj] -= delta;
  next.history = state.history;

  const double q_at_u = next.p.eval(u);
  const double dq_at_u = next.p.partial(j, 1).eval(u);
  rec.step_limit = dq_at_u > 0.0 ? q_at_u / dq_at_u : std::numeric_limits<double>::infinity();
  if (delta >= rec.step_limit * (1.0 + tol)) {
    throw Error(Errc::MonotonicityViolated, "step exceeds 1/Phi of the differentiated polynomial");
  }
  if (!is_above_roots(next.p, next.u)) {
    throw Error(Errc::NotAboveRoots, "moved point left the region above the roots");
  }
  rec.phi_after = all_phi(next.p, next.u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (rec.phi_after[i] > rec.phi_before[i] + rel_tol(tol, rec.phi_before[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "barrier in direction " << i << " grew from " << rec.phi_before[i] << " to " << rec.phi_after[i];
      throw Error(Errc::MonotonicityViolated, os.str());
    }
  }
  next.history.push_back(std::move(rec));
  return next;
}

}  // namespace

BarrierState barrier_start(const MultiAffine& g, int r, double b) {
  if (r < 2) throw Error(Errc::ParamOutOfRange, "barrier iteration needs r >= 2");
  BarrierState s;
  s.p = power(MultiDegree::from_multi_affine(g), r);
  s.u.assign(static_cast<std::size_t>(g.num_vars()), b);
  if (!is_above_roots(s.p, s.u)) throw Error(Errc::NotAboveRoots, "b 1 is not above the roots of g^r");
  return s;
}

BarrierState barrier_step(const BarrierState& state, int j, int r, BarrierMode mode, double tol) {
  if (j < 0 || j >= state.p.num_vars()) throw Error(Errc::DimensionMismatch, "direction out of range");
  if (state.p.caps()[static_cast<std::size_t>(j)] > r) {
    throw Error(Errc::InvalidInput, "degree in z_j exceeds r");
  }
  return step_with_phi(state, j, r, mode, tol, all_phi(state.p, state.u));
}

BarrierRun barrier_run(const MultiAffine& g, int r, double b, const BarrierOptions& opts) {
  const int n = g.num_vars();
  if (n < 1) throw Error(Errc::InvalidInput, "barrier run needs at least one variable");
  if (!(b > 1.0)) throw Error(Errc::ParamOutOfRange, "b must exceed 1");
  std::vector<int> order = opts.order;
  if (order.empty()) {
    for (int i = 0; i < n; ++i) order.push_back(i);
  }
  const double alpha = diagonal_alpha(g);
  BarrierRun run;
  run.b = b;
  run.phi_upper = r * (alpha / (b - 1.0) + (1.0 - alpha) / b);
  run.uniform_delta = (static_cast<double>((r - 1) * (r - 1)) / r) / (run.phi_upper - 1.0 / b);

  BarrierState state = barrier_start(g, r, b);
  std::vector<double> phi = all_phi(state.p, state.u);
  for (double f : phi) {
    if (f > run.phi_upper + rel_tol(opts.tol, run.phi_upper)) run.phi_bound_holds = false;
  }
  for (int j : order) {
    state = step_with_phi(state, j, r, opts.mode, opts.tol, phi);
    const auto& rec = state.history.back();
    run.deltas.push_back(rec.delta);
    if (rec.delta < run.uniform_delta - rel_tol(opts.tol, run.uniform_delta)) run.uniform_delta_holds = false;
    phi = rec.phi_after;
    ++run.steps_checked;
  }
  run.bound = b - *std::min_element(run.deltas.begin(), run.deltas.end());
  const std::vector<double> corner(static_cast<std::size_t>(n), run.bound + kAboveRootsMargin * 2);
  if (!is_above_roots(state.p, corner)) {
    throw Error(Errc::NotAboveRoots, "final corner point is not above the roots");
  }
  return run;
}

CertifiedBound certified_maxroot_bound(const MultiAffine& g, int r, const BarrierOptions& opts) {
  if (opts.grid_points < 3) throw Error(Errc::ParamOutOfRange, "grid needs at least 3 points");
  if (!(opts.b_max > 1.0)) throw Error(Errc::ParamOutOfRange, "b_max must exceed 1");
  CertifiedBound out;
  out.alpha = diagonal_alpha(g);
  out.bound = std::numeric_limits<double>::infinity();
  auto evaluate = [&](double b) {
    const BarrierRun run = barrier_run(g, r, b, opts);
    ++out.runs;
    out.steps_checked += run.steps_checked;
    out.phi_bound_holds = out.phi_bound_holds && run.phi_bound_holds;
    out.uniform_delta_holds = out.uniform_delta_holds && run.uniform_delta_holds;
    if (run.bound < out.bound) {
      out.bound = run.bound;
      out.best_b = b;
    }
    return run.bound;
  };

  const double lo = std::log(1e-8);
  const double hi = std::log(opts.b_max - 1.0);
  std::vector<double> grid(static_cast<std::size_t>(opts.grid_points));
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 1.0 + std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1));
    vals[i] = evaluate(grid[i]);
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  double a = grid[best == 0 ? 0 : best - 1];
  double c = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = evaluate(x1);
  double f2 = evaluate(x2);
  for (int it = 0; it < opts.refine_iters; ++it) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = evaluate(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = evaluate(x2);
    }
  }
  return out;
}

}  // namespace srpave::paving
