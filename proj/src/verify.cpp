#include "srpave/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "srpave/hyperbolic.hpp"
#include "srpave/paving.hpp"
#include "srpave/sr_process.hpp"
#include "srpave/stable_poly.hpp"

namespace srpave::verify {

void InstanceResult::require(bool cond, const std::string& invariant) {
  if (cond) return;
  ok = false;
  if (failure.find(invariant) != std::string::npos) return;
  if (!failure.empty()) failure += ",";
  failure += invariant;
}

namespace {

constexpr sr::Family kFamilies[] = {sr::Family::Independent, sr::Family::Determinantal, sr::Family::Conditioned,
                                    sr::Family::Field, sr::Family::SpanningTree};

sr::Family pick_family(std::mt19937_64& rng) { return kFamilies[rng() % 5]; }

int pick_n(int max_n, std::mt19937_64& rng, int min_n = 1) {
  return min_n + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_n - min_n + 1)));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool is_independent(const sr::PointProcess& x, double tol) {
  return max_abs_diff(x.pmf(), sr::independent_pmf(sr::marginals(x))) <= tol;
}

using InstanceFn = std::function<void(InstanceResult&, const SuiteConfig&, std::mt19937_64&)>;

// ---- paving suites ---------------------------------------------------------

void partition_identity(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const int r = 2 + out.index % 2;
  const MultiAffine g = (rng() % 2 == 0) ? random_kernel_poly(n, rng) : random_paving_instance(n, r, rng).g;
  out.n = n;
  const double d = relative_coeff_distance(paving::g_r_bruteforce(g, r), paving::g_r_differential(g, r));
  out.value("r", r);
  out.value("rel_diff", d);
  out.require(d <= cfg.tol, "g_r_identity");
}

void paving_bound(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const PavingInstance inst = random_paving_instance(n, 2, rng);
  out.n = n;
  const paving::PavingResult res = paving::exhaustive_paving(inst.g, {2, inst.alpha, 1.0});
  const double bound = paving::lr_bound(2, inst.alpha);
  out.value("alpha", inst.alpha);
  out.value("best", res.max_part_value());
  out.value("bound", bound);
  out.require(res.max_part_value() <= bound + cfg.tol, "paving_bound");
}

void interlacing_descent(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const PavingInstance inst = random_paving_instance(n, 2, rng);
  out.n = n;
  const paving::PavingResult res = paving::interlacing_descent(inst.g, {2, inst.alpha, 1.0}, 1e-9);
  double worst_residual = 0.0;
  for (const auto& node : res.trace) worst_residual = std::max(worst_residual, node.sum_residual);
  out.value("leaf", res.max_part_value());
  out.value("root", res.reference_maxroot);
  out.value("node_residual", worst_residual);
  out.require(res.max_part_value() <= res.reference_maxroot + cfg.tol, "descent_leaf_bound");
  out.require(worst_residual <= cfg.tol, "node_sum_of_children");
}

void barrier_soundness(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const PavingInstance inst = random_paving_instance(n, 2, rng);
  out.n = n;
  paving::BarrierOptions opts;
  opts.tol = 1e-9;
  const paving::CertifiedBound cb = paving::certified_maxroot_bound(inst.g, 2, opts);
  const double target = rr::maxroot(paving::g_r_differential(inst.g, 2));
  const double bound = paving::lr_bound(2, inst.alpha);
  out.value("certified", cb.bound);
  out.value("maxroot_g_r", target);
  out.value("lr_bound", bound);
  out.value("steps", cb.steps_checked);
  out.require(cb.bound >= target - cfg.tol, "barrier_above_maxroot");
  out.require(cb.bound <= bound + 2e-3, "barrier_near_closed_form");
}

void matrix_paving(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const PavingInstance inst = random_paving_instance(n, 2, rng);
  out.n = n;
  const paving::MatrixPavingReport rep = paving::matrix_paving(inst.k, {2, inst.alpha, 1.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.result.partition.parts.size(); ++i) {
    const Mask s = rep.result.partition.parts[i];
    if (s == 0) continue;
    const double norm = linalg::symmetric_op_norm(linalg::principal_submatrix(inst.k, s));
    worst = std::max(worst, std::abs(norm - rep.result.per_part_maxroot[i]));
  }
  out.value("max_norm", rep.result.max_part_value());
  out.value("mismatch", worst);
  out.value("bound", paving::lr_bound(2, inst.alpha));
  out.require(worst <= cfg.tol, "part_norm_equals_maxroot");
  out.require(rep.result.max_part_value() <= paving::lr_bound(2, inst.alpha) + cfg.tol, "paving_bound");
}

void two_stage(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::PointProcess x = sr::random_process(pick_family(rng), n, rng);
  out.n = x.n();
  const MultiAffine xi = sr::centered_kernel(x);
  const paving::PavingResult res = paving::two_stage_paving(xi, 4, 1.0);
  const double bound = paving::zero_diag_bound(4, 1.0);
  out.value("max_abs_root", res.max_part_value());
  out.value("bound", bound);
  out.value("num_parts", static_cast<double>(res.num_parts));
  out.require(res.num_parts == 16, "r_squared_parts");
  out.require(res.max_part_value() <= bound + cfg.tol, "zero_diagonal_bound");
}

// ---- kernel suites ---------------------------------------------------------

void kernel_coefficients(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::PointProcess x = sr::random_process(pick_family(rng), n, rng);
  out.n = x.n();
  const auto nn = static_cast<std::size_t>(x.n());
  const MultiAffine g = sr::kernel_poly(x);
  const MultiAffine sub =
      sr::generating_poly(x).affine_sub(std::vector<double>(nn, -1.0), std::vector<double>(nn, 1.0)).inversion();
  const double coeff_err = relative_coeff_distance(g, sub);
  const double trip = max_abs_diff(sr::process_from_kernel(g).pmf(), x.pmf());
  out.value("substitution_diff", coeff_err);
  out.value("round_trip", trip);
  out.require(coeff_err <= cfg.tol, "kernel_equals_substitution");
  out.require(trip <= cfg.tol, "kernel_round_trip");
}

// Invalid kernels, one failure mode each: top coefficient, root interval,
// reconstructed mass. The mass perturbation moves weight between two
// monomials of equal degree, which leaves diag(g) untouched.
MultiAffine perturb_kernel(const MultiAffine& g, int mode, std::mt19937_64& rng) {
  const int n = g.num_vars();
  MultiAffine bad = g;
  if (mode == 0) {
    bad.set_coeff(full_mask(n), g.top_coeff() * (1.1 + 0.5 * (rng() % 2)));
    return bad;
  }
  if (mode == 1) {
    const double low = rr::min_root(g.diagonalize());
    return g.shifted(std::vector<double>(static_cast<std::size_t>(n), low - 1.05));
  }
  const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  const int j = (i + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1))) % n;
  MultiAffine dir(n);
  dir.set_coeff(bit(i), 1.0);
  dir.set_coeff(bit(j), -1.0);
  // Masses are linear in g: signed kernel coefficients, then a superset Mobius pass.
  const sr::PointProcess base = sr::process_from_kernel(g);
  std::vector<double> change(base.pmf().size(), 0.0);
  for (Mask a = 0; a < change.size(); ++a) change[a] = (popcount(a) % 2 ? -1.0 : 1.0) * dir.kernel_coeff(a);
  for (int v = 0; v < n; ++v) {
    for (Mask a = 0; a < change.size(); ++a) {
      if (!contains(a, v)) change[a] -= change[a | bit(v)];
    }
  }
  double t = 0.0;
  for (Mask b = 0; b < change.size(); ++b) {
    if (change[b] < -1e-12) {
      const double need = (base.prob(b) + 0.05) / -change[b];
      if (t == 0.0 || need < t) t = need;
    }
  }
  bad += dir * t;
  return bad;
}

void kernel_classification(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng, 2);
  const sr::PointProcess x = sr::random_process(pick_family(rng), n, rng);
  out.n = x.n();
  const MultiAffine g = sr::kernel_poly(x);
  const auto seed = static_cast<std::uint64_t>(out.index) + 1;
  const sr::KernelVerdict good = sr::kernel_validity(g, 1e-9, 64, seed);
  out.require(good.valid(), "valid_kernel_accepted");
  const int mode = out.index % 3;
  const MultiAffine bad = perturb_kernel(g, mode, rng);
  const sr::KernelVerdict v = sr::kernel_validity(bad, 1e-9, 64, seed);
  out.value("mode", mode);
  out.require(!v.valid(), "invalid_kernel_rejected");
  const bool flagged = mode == 0 ? !v.top_ok : mode == 1 ? !v.roots_ok : !v.mass_ok;
  out.require(flagged, "invalid_kernel_reason");
  (void)cfg;
}

void size_law(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::Family f = kFamilies[1 + out.index % 4];
  const sr::PointProcess x = sr::random_process(f, n, rng);
  out.n = x.n();
  out.note = sr::to_string(f);
  const double d = max_abs_diff(sr::size_distribution(x), sr::bernoulli_convolution(sr::kernel_spectrum(x)));
  out.value("max_diff", d);
  out.require(d <= cfg.tol, "size_law");
}

void entropy_bound(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::Family f = pick_family(rng);
  const sr::PointProcess x = sr::random_process(f, n, rng);
  out.n = x.n();
  out.note = sr::to_string(f);
  const sr::EntropyBound eb = sr::entropy_lower_bound_check(x, cfg.tol);
  const double gap = eb.entropy - eb.spectral_sum;
  out.value("entropy", eb.entropy);
  out.value("spectral_sum", eb.spectral_sum);
  out.value("gap", gap);
  out.require(eb.holds, "entropy_lower_bound");
  const bool indep = is_independent(x, 1e-12);
  if (indep) out.require(std::abs(gap) <= cfg.tol, "equality_for_independent");
  if (std::abs(gap) <= cfg.tol) out.require(is_independent(x, 1e-6), "equality_only_for_independent");
  const sr::AuxEntropyReport aux = sr::aux_entropy_checks(x, cfg.tol);
  out.value("half_marginal_entropy", aux.half_marginal_entropy);
  out.value("min_covariance_row", aux.min_covariance_row);
  out.require(aux.half_sum_holds, "half_marginal_entropy");
  out.require(aux.covariance_holds, "covariance_row");
}

void conditioning_interlacing(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng, 2);
  const sr::PointProcess x = sr::random_process(pick_family(rng), n, rng);
  out.n = x.n();
  const UniPoly d = sr::kernel_poly(x).diagonalize();
  const std::vector<double> p = sr::marginals(x);
  int checked = 0;
  double worst = -1.0;
  for (int i = 0; i < x.n(); ++i) {
    const double pi = p[static_cast<std::size_t>(i)];
    if (pi <= 0.01 || pi >= 0.99) continue;
    for (bool present : {true, false}) {
      const UniPoly di = sr::kernel_poly(sr::condition(x, i, present)).diagonalize();
      worst = std::max(worst, rr::wronskian_max(di, d));
      out.require(rr::proper_position(di, d, cfg.tol), present ? "conditioned_present" : "conditioned_absent");
      ++checked;
    }
  }
  out.value("pairs", checked);
  out.value("wronskian_max", worst);
}

void majorization_search(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::Family f = pick_family(rng);
  const sr::PointProcess x = sr::random_process(f, n, rng);
  out.n = x.n();
  out.note = sr::to_string(f);
  const sr::MajorizationReport rep = sr::majorization_conjecture_check(x, cfg.tol);
  out.value("margin", rep.margin);
  out.value("majorizes", rep.majorizes ? 1.0 : 0.0);
  if (f == sr::Family::Determinantal || f == sr::Family::Independent) {
    out.require(rep.majorizes, "determinantal_majorization");
  } else if (!rep.majorizes) {
    out.note += " counterexample";
  }
}

void hkpv_mixture(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  out.n = n;
  const linalg::Matrix k = sr::random_contraction(n, rng);
  const sr::MixtureReport rep = sr::hkpv_mixture_check(k, cfg.tol);
  out.value("max_error", rep.max_error);
  out.value("terms", rep.terms);
  out.require(rep.ok, "mixture_identity");
}

void f_construction(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::Family f = pick_family(rng);
  const sr::PointProcess x = sr::random_process(f, n, rng);
  out.n = x.n();
  out.note = sr::to_string(f);
  try {
    const hyp::FConstruction fc = hyp::f_construction(x, cfg.tol);
    out.value("specialization_error", fc.specialization_error);
    out.value("margin", fc.margin);
    out.require(fc.majorized, "kernel_roots_majorized");
  } catch (const Error& e) {
    if (e.code() != Errc::SpecializationMismatch) throw;
    out.require(false, "f_specializations");
    out.note += std::string(" ") + e.what();
  }
}

void sr_paving_suite(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const sr::PointProcess x = sr::random_process(pick_family(rng), n, rng);
  out.n = x.n();
  const std::vector<double> deltas = cfg.delta > 0 ? std::vector<double>{cfg.delta} : std::vector<double>{0.5, 0.25};
  for (double delta : deltas) {
    const int r = sr::r_for_delta(delta);
    const sr::SrPavingReport rep = sr::sr_paving(x, r);
    double gap = 0.0, norm = 0.0;
    for (double g : rep.entropy_gaps) gap = std::max(gap, g);
    for (double m : rep.per_part_rootnorm) norm = std::max(norm, m);
    std::ostringstream key;
    key << delta;
    out.value("r@" + key.str(), r);
    out.value("max_gap@" + key.str(), gap);
    out.value("max_rootnorm@" + key.str(), norm);
    out.require(gap < delta, "entropy_gap_below_delta");
    out.require(norm <= rep.epsilon + cfg.tol, "rootnorm_below_epsilon");
  }
}

void above_roots(InstanceResult& out, const SuiteConfig& cfg, std::mt19937_64& rng) {
  const int n = pick_n(cfg.n, rng);
  const MultiAffine p = hyp::random_stable(n, rng);
  out.n = n;
  const auto seed = static_cast<std::uint64_t>(rng());
  const hyp::LemmaSweep a = hyp::ab_convexity_test(p, 10, seed);
  const hyp::LemmaSweep b = hyp::boundary_lemma_test(p, 10, seed + 1);
  const hyp::LemmaSweep c = hyp::cone_direction_invariance(p, 10, seed + 2);
  out.value("convexity_tested", a.tested);
  out.value("boundary_tested", b.tested);
  out.value("direction_tested", c.tested);
  out.require(a.ok(), "ab_convexity");
  out.require(b.ok(), "boundary_lemma");
  out.require(c.ok(), "cone_direction_invariance");
  (void)cfg;
}

struct Suite {
  SuiteInfo info;
  InstanceFn fn;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {{"partition-identity", "sum of g_S over ordered r-partitions equals the differential formula for g_r", 5, 200,
        1e-8},
       partition_identity},
      {{"paving-bound", "some r-partition has every part maxroot below the closed-form paving bound", 6, 100, 1e-8},
       paving_bound},
      {{"interlacing-descent", "greedy descent through the interlacing family ends at a leaf below the root", 6, 100,
        1e-8},
       interlacing_descent},
      {{"barrier-soundness", "barrier steps stay above the roots, never raise a barrier and bound maxroot(g_r)", 5,
        100, 1e-8},
       barrier_soundness},
      {{"matrix-paving", "part maxroots of the characteristic polynomial equal operator norms of the blocks", 8, 100,
        1e-8},
       matrix_paving},
      {{"two-stage", "zero-diagonal kernels pave into r^2 parts with small root norm", 6, 50, 1e-8}, two_stage},
      {{"kernel-coefficients", "kernel from inclusion probabilities equals the substitution and inverts exactly", 8,
        1000, 1e-10},
       kernel_coefficients},
      {{"kernel-classification", "valid kernels accepted, perturbed ones rejected for the right reason", 6, 1000, 1e-9},
       kernel_classification},
      {{"size-law", "size of the process is a sum of independent Bernoulli(lambda_i)", 10, 500, 1e-9}, size_law},
      {{"entropy-bound", "entropy is at least sum h(lambda_i), with equality only for independent processes", 10, 500,
        1e-9},
       entropy_bound},
      {{"conditioning-interlacing", "both conditional kernel diagonals are in proper position with the kernel", 8, 300,
        1e-7},
       conditioning_interlacing},
      {{"majorization-search", "independent law with the kernel spectrum majorizes the process law", 8, 100000, 1e-9},
       majorization_search},
      {{"hkpv-mixture", "determinantal law is a mixture of projection processes", 6, 100, 1e-8}, hkpv_mixture},
      {{"f-construction", "F sections reproduce the kernel, centred kernel and marginals; majorization follows", 5,
        200, 1e-8},
       f_construction},
      {{"sr-paving", "paving the centred kernel makes every part's entropy close to the independent one", 8, 50, 1e-8},
       sr_paving_suite},
      {{"above-roots", "above-the-roots lemmas and cone direction invariance on stable polynomials", 5, 500, 1e-9},
       above_roots},
  };
  return all;
}

}  // namespace

const std::vector<SuiteInfo>& registry() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const Suite& s : suites()) v.push_back(s.info);
    return v;
  }();
  return infos;
}

std::mt19937_64 instance_rng(std::uint64_t seed, int suite, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

MultiAffine random_kernel_poly(int n, std::mt19937_64& rng) {
  return sr::kernel_poly(sr::random_process(pick_family(rng), n, rng));
}

PavingInstance random_paving_instance(int n, int r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  PavingInstance out;
  out.k = sr::random_contraction(n, rng);
  const double cap = (r - 1.0) * (r - 1.0) / (static_cast<double>(r) * r) * unif(rng);
  const double top = out.k.diagonal().maxCoeff();
  if (top > cap) out.k *= cap / top;
  out.g = stable::char_poly_matrix(out.k);
  out.alpha = std::max(paving::diagonal_alpha(out.g), 1e-12);
  return out;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg_in) {
  const auto& all = suites();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Suite& s) { return s.info.name == name; });
  if (it == all.end()) throw Error(Errc::InvalidInput, "unknown suite " + name);
  const int pos = static_cast<int>(it - all.begin());

  SuiteReport rep;
  rep.suite = name;
  rep.statement = it->info.statement;
  rep.config = cfg_in;
  SuiteConfig& cfg = rep.config;
  if (cfg.n <= 0) cfg.n = it->info.default_n;
  if (cfg.count <= 0) cfg.count = it->info.default_count;
  if (cfg.tol <= 0) cfg.tol = it->info.default_tol;
  if (cfg.threads <= 0) cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const auto start = std::chrono::steady_clock::now();
  rep.instances.resize(static_cast<std::size_t>(cfg.count));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < cfg.count; i = next++) {
      InstanceResult& res = rep.instances[static_cast<std::size_t>(i)];
      res.index = i;
      std::mt19937_64 rng = instance_rng(cfg.seed, pos, i);
      try {
        it->fn(res, cfg, rng);
      } catch (const Error& e) {
        res.require(false, std::string("error:") + std::string(to_string(e.code())));
        res.note += (res.note.empty() ? "" : " ") + std::string(e.what());
      }
    }
  };
  const int nthreads = std::min(cfg.threads, cfg.count);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  for (const InstanceResult& r : rep.instances) (r.ok ? rep.passed : rep.failed)++;
  if (name == "majorization-search") {
    int found = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (const InstanceResult& r : rep.instances) {
      if (r.note.find("counterexample") != std::string::npos) ++found;
      for (const auto& [k, v] : r.values) {
        if (k == "margin") margin = std::min(margin, v);
      }
    }
    rep.summary.emplace_back("counterexamples", found);
    rep.summary.emplace_back("min_margin", margin);
  }
  return rep;
}

}  // namespace srpave::verify
