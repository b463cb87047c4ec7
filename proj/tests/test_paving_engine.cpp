#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "srpave/exact.hpp"
#include "srpave/paving.hpp"
#include "srpave/stable_poly.hpp"

using srpave::Errc;
using srpave::Error;
using srpave::Mask;
using srpave::MultiAffine;
using srpave::Rational;
using srpave::UniPoly;
using srpave::linalg::Matrix;
namespace pv = srpave::paving;
namespace rr = srpave::rr;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an srpave::Error");
  return Errc::InvalidInput;
}

/// Random PSD contraction rescaled so that every diagonal entry is <= alpha.
Matrix kernel_with_diag_cap(int n, double alpha, std::mt19937_64& rng) {
  Matrix k = oracle::random_psd(n, rng, 0.0, 1.0);
  const double d = k.diagonal().maxCoeff();
  if (d > alpha) k *= alpha / d;
  return k;
}

MultiAffine product_kernel(const std::vector<double>& p) { return MultiAffine::linear_product(p); }

pv::Partition parts(std::vector<std::vector<int>> idx) {
  pv::Partition s;
  for (const auto& v : idx) s.parts.push_back(srpave::from_indices(v, 20));
  return s;
}

/// Brute-force min over all r^n labelled partitions of the largest part value.
double brute_min_max(const MultiAffine& g, int r) {
  const int n = g.num_vars();
  std::vector<double> val(g.size());
  for (Mask s = 0; s < g.size(); ++s) val[s] = rr::maxroot(g.partial(srpave::complement(s, n)).diagonalize());
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  double best = INFINITY;
  while (true) {
    std::vector<Mask> m(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])] |= srpave::bit(i);
    double worst = -INFINITY;
    for (Mask s : m) worst = std::max(worst, val[s]);
    best = std::min(best, worst);
    int i = 0;
    while (i < n && ++label[static_cast<std::size_t>(i)] == r) label[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("closed-form bounds") {
  CHECK(pv::lr_bound(2, 0.25) == doctest::Approx(1.0).epsilon(1e-14));
  const double third = std::sqrt(5.0 / 18.0) + 1.0 / 3.0;
  CHECK(pv::lr_bound(3, 1.0 / 9.0) == doctest::Approx(third * third).epsilon(1e-14));
  const double four = std::sqrt(1.0 / 12.0) + std::sqrt(0.5);
  CHECK(pv::lr_bound(4, 0.5) == doctest::Approx(four * four).epsilon(1e-14));
  CHECK(pv::zero_diag_bound(4, 1.0) == doctest::Approx(1.0 / 6.0 + 2.0 * std::sqrt(1.0 / 6.0)).epsilon(1e-14));
  CHECK(pv::zero_diag_bound(4, 1.0) == doctest::Approx(0.983163).epsilon(1e-6));
  CHECK(pv::mss_bound(2, 0.25) == doctest::Approx(1.457107).epsilon(1e-6));
  CHECK(pv::mss_bound(2, 0.25) > pv::lr_bound(2, 0.25));
  // The new bound never exceeds the older one on the admissible range.
  for (int r = 2; r <= 6; ++r) {
    const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
    for (int k = 1; k <= 20; ++k) {
      const double a = cap * k / 20.0;
      CHECK(pv::lr_bound(r, a) <= pv::mss_bound(r, a) + 1e-15);
    }
    CHECK(pv::lr_bound(r, cap) == doctest::Approx(1.0));
  }
  CHECK(code_of([] { pv::lr_bound(2, 0.3); }) == Errc::ParamOutOfRange);
  CHECK(code_of([] { pv::lr_bound(1, 0.0); }) == Errc::ParamOutOfRange);
  CHECK(code_of([] { pv::zero_diag_bound(3, 1.0); }) == Errc::ParamOutOfRange);
  CHECK(code_of([] { pv::zero_diag_bound(4, 0.0); }) == Errc::ParamOutOfRange);
}

TEST_CASE("g_S of explicit partitions") {
  const double a = 0.4;
  const MultiAffine g1 = product_kernel({a});
  CHECK(rr::roots(pv::g_of_partition(g1, parts({{0}, {}}))) == rr::RootVector{a});

  const MultiAffine g2 = product_kernel({0.2, 0.7});
  const UniPoly split = pv::g_of_partition(g2, parts({{0}, {1}}));
  CHECK(srpave::relative_coeff_distance(split, UniPoly::from_roots({0.2, 0.7})) < 1e-14);
  const UniPoly together = pv::g_of_partition(g2, parts({{0, 1}, {}, {}}));
  CHECK(srpave::relative_coeff_distance(together, g2.diagonalize()) < 1e-14);
  CHECK(code_of([&] { pv::g_of_partition(g2, parts({{0}, {0, 1}})); }) == Errc::InvalidInput);
}

TEST_CASE("g_r by enumeration and by differentiation agree") {
  const double a = 0.4;
  const MultiAffine g1 = product_kernel({a});
  CHECK(srpave::relative_coeff_distance(pv::g_r_bruteforce(g1, 2), UniPoly{-2 * a, 2.0}) < 1e-15);
  CHECK(srpave::relative_coeff_distance(pv::g_r_differential(g1, 2), UniPoly{-2 * a, 2.0}) < 1e-15);
  CHECK(rr::maxroot(pv::g_r_differential(g1, 2)) == doctest::Approx(a));

  const MultiAffine g2 = product_kernel({0.3, 0.9});
  CHECK(srpave::relative_coeff_distance(pv::g_r_bruteforce(g2, 1), g2.diagonalize()) < 1e-15);

  // Monomial z1...zn: every g_S is a multiple of x^n.
  for (int n = 1; n <= 4; ++n) {
    const MultiAffine mono = MultiAffine::monomial(n, srpave::full_mask(n));
    for (int r = 1; r <= 3; ++r) {
      const UniPoly q = pv::g_r_differential(mono, r);
      CHECK(q.degree() == n);
      for (int k = 0; k < n; ++k) CHECK(q.coeff(k) == 0.0);
      CHECK(srpave::relative_coeff_distance(q, pv::g_r_bruteforce(mono, r)) < 1e-14);
    }
  }

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int r = 1 + static_cast<int>(rng() % 3);
    const Matrix k = oracle::random_psd(n, rng);
    const MultiAffine g = srpave::stable::char_poly_matrix(k);
    INFO("n=" << n << " r=" << r);
    CHECK(srpave::relative_coeff_distance(pv::g_r_bruteforce(g, r), pv::g_r_differential(g, r)) < 1e-8);
  }

  // Exact arithmetic: the identity holds coefficient for coefficient.
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const MultiAffine gd = srpave::stable::char_poly_matrix(oracle::random_psd(n, rng));
    const auto g = srpave::convert_multi_affine<Rational>(gd);
    for (int r = 2; r <= 3; ++r) CHECK(pv::g_r_bruteforce(g, r) == pv::g_r_differential(g, r));
  }

  CHECK(code_of([] { pv::g_r_bruteforce(MultiAffine::constant(20, 1.0), 3); }) == Errc::BudgetExceeded);
}

TEST_CASE("node polynomials form a consistent tree") {
  const MultiAffine g2 = product_kernel({0.2, 0.7});
  // Leaves are the partition polynomials.
  const auto leaf = parts({{1}, {0}});
  CHECK(srpave::relative_coeff_distance(pv::node_polynomial(g2, leaf, 2), pv::g_of_partition(g2, leaf)) < 1e-14);
  // The first-level node is the sum of its two leaves.
  const UniPoly q1 = pv::node_polynomial(g2, parts({{0}, {}}), 1);
  const UniPoly sum = pv::g_of_partition(g2, parts({{0, 1}, {}})) + pv::g_of_partition(g2, parts({{0}, {1}}));
  CHECK(srpave::relative_coeff_distance(q1, sum) < 1e-14);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 2 + static_cast<int>(rng() % 2);
    const int n = r == 2 ? 1 + static_cast<int>(rng() % 4) : 1 + static_cast<int>(rng() % 3);
    const MultiAffine g = srpave::stable::char_poly_matrix(oracle::random_psd(n, rng));
    pv::Partition root;
    root.parts.assign(static_cast<std::size_t>(r), 0);
    CHECK(srpave::relative_coeff_distance(pv::node_polynomial(g, root, 0), pv::g_r_differential(g, r)) < 1e-10);

    // Random path: every node equals the sum of its r children.
    pv::Partition node = root;
    for (int k = 0; k < n; ++k) {
      const UniPoly q = pv::node_polynomial(g, node, k);
      UniPoly total;
      for (int j = 0; j < r; ++j) {
        pv::Partition child = node;
        child.parts[static_cast<std::size_t>(j)] |= srpave::bit(k);
        total += pv::node_polynomial(g, child, k + 1);
      }
      CHECK(srpave::relative_coeff_distance(q, total) < 1e-10);
      node.parts[rng() % static_cast<std::size_t>(r)] |= srpave::bit(k);
    }
    CHECK(srpave::relative_coeff_distance(pv::node_polynomial(g, node, n), pv::g_of_partition(g, node)) < 1e-10);
  }
}

TEST_CASE("min_max_partition matches enumeration") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng() % 7);
    const int r = 1 + static_cast<int>(rng() % 4);
    std::vector<double> val(std::size_t{1} << n);
    for (double& v : val) v = u(rng);
    const auto s = pv::min_max_partition(val, n, r);
    REQUIRE(s.r() == r);
    s.validate(n);
    double got = -INFINITY;
    for (Mask m : s.parts) got = std::max(got, val[m]);

    std::vector<int> label(static_cast<std::size_t>(n), 0);
    double best = INFINITY;
    while (true) {
      std::vector<Mask> m(static_cast<std::size_t>(r), 0);
      for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])] |= srpave::bit(i);
      double worst = -INFINITY;
      for (Mask x : m) worst = std::max(worst, val[x]);
      best = std::min(best, worst);
      int i = 0;
      while (i < n && ++label[static_cast<std::size_t>(i)] == r) label[static_cast<std::size_t>(i++)] = 0;
      if (i == n) break;
    }
    CHECK(got == best);
  }
}

TEST_CASE("exhaustive paving") {
  const double a = 0.2;
  const auto one = pv::exhaustive_paving(product_kernel({a}), {2, 0.25, 1.0});
  CHECK(one.max_part_value() == doctest::Approx(a));
  CHECK(one.certified);

  // Diagonal kernel alpha I: every non-empty part has maxroot alpha.
  const double alpha = 0.2;
  const MultiAffine diag = srpave::stable::char_poly_matrix(Matrix::Identity(4, 4) * alpha);
  const auto rd = pv::exhaustive_paving(diag, {2, 0.25, 1.0});
  CHECK(rd.max_part_value() == doctest::Approx(alpha));
  for (std::size_t j = 0; j < rd.partition.parts.size(); ++j) {
    if (rd.partition.parts[j] != 0) CHECK(rd.per_part_maxroot[j] == doctest::Approx(alpha));
  }

  // z1 z2 - (z1 + z2)/2 has |a_{i}| = 1/2.
  MultiAffine bad(2);
  bad.set_coeff(3, 1.0);
  bad.set_coeff(1, -0.5);
  bad.set_coeff(2, -0.5);
  CHECK(code_of([&] { pv::exhaustive_paving(bad, {2, 0.25, 1.0}); }) == Errc::HypothesisViolated);
  CHECK(code_of([&] { pv::exhaustive_paving(diag, {2, 0.5, 1.0}); }) == Errc::HypothesisViolated);
  CHECK(code_of([&] { pv::exhaustive_paving(diag * 2.0, {2, 0.25, 1.0}); }) == Errc::HypothesisViolated);

  // Bound theorem on random kernels, cross-checked by plain enumeration.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int r = 2 + static_cast<int>(rng() % 2);
    const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
    const double al = cap * (0.3 + 0.7 * static_cast<double>(rng() % 1000) / 1000.0);
    const Matrix k = kernel_with_diag_cap(n, al, rng);
    const MultiAffine g = srpave::stable::char_poly_matrix(k);
    const auto res = pv::exhaustive_paving(g, {r, al, 1.0});
    INFO("n=" << n << " r=" << r << " alpha=" << al);
    res.partition.validate(n);
    CHECK(res.certified);
    CHECK(res.max_part_value() <= pv::lr_bound(r, al) + 1e-8);
    CHECK(res.max_part_value() == doctest::Approx(brute_min_max(g, r)).epsilon(1e-12));
    for (std::size_t j = 0; j < res.partition.parts.size(); ++j) {
      const Mask s = res.partition.parts[j];
      const double want = s == 0 ? -INFINITY : srpave::linalg::symmetric_eigenvalues(srpave::linalg::principal_submatrix(k, s)).maxCoeff();
      if (s == 0) {
        CHECK(std::isinf(res.per_part_maxroot[j]));
      } else {
        CHECK(res.per_part_maxroot[j] == doctest::Approx(want).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("interlacing descent") {
  const double a = 0.2;
  const auto one = pv::interlacing_descent(product_kernel({a}), {2, 0.25, 1.0});
  REQUIRE(one.trace.size() == 1);
  CHECK(one.trace[0].child_maxroots[0] == doctest::Approx(a));
  CHECK(one.trace[0].child_maxroots[1] == doctest::Approx(a));
  CHECK(one.max_part_value() == doctest::Approx(a));

  // Independent case: any leaf has maxroot max p_i.
  const std::vector<double> p{0.1, 0.2, 0.05, 0.15};
  const auto ind = pv::interlacing_descent(product_kernel(p), {2, 0.25, 1.0});
  CHECK(rr::maxroot(pv::g_of_partition(product_kernel(p), ind.partition)) == doctest::Approx(0.2));

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = trial % 4 == 0 ? 3 : 2;
    const int n = 1 + static_cast<int>(rng() % (r == 2 ? 5 : 4));
    const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
    const Matrix k = kernel_with_diag_cap(n, cap, rng);
    const MultiAffine g = srpave::stable::char_poly_matrix(k);
    const double al = std::max(pv::diagonal_alpha(g), 1e-3);
    const auto res = pv::interlacing_descent(g, {r, al, 1.0});
    INFO("trial " << trial << " n=" << n << " r=" << r);
    res.partition.validate(n);
    const double gr_max = rr::maxroot(pv::g_r_differential(g, r));
    const double leaf_max = rr::maxroot(pv::g_of_partition(g, res.partition));
    CHECK(leaf_max <= gr_max + 1e-8);
    CHECK(res.max_part_value() == doctest::Approx(leaf_max).epsilon(1e-9));
    CHECK(res.max_part_value() <= pv::lr_bound(r, al) + 1e-8);
    for (const auto& node : res.trace) CHECK(node.sum_residual < 1e-10);
    // Maxroots along the path never increase.
    for (std::size_t l = 1; l < res.trace.size(); ++l) CHECK(res.trace[l].maxroot <= res.trace[l - 1].maxroot + 1e-9);
  }
}

TEST_CASE("above-roots and barrier function") {
  const MultiAffine p = product_kernel({1.0, 1.0});
  CHECK(pv::is_above_roots(p, {2.0, 2.0}));
  CHECK_FALSE(pv::is_above_roots(p, {1.0, 1.0}));
  CHECK_FALSE(pv::is_above_roots(p, {2.0, 0.5}));
  const auto pd = srpave::MultiDegree::from_multi_affine(p);
  CHECK(pv::is_above_roots(pd, {2.0, 2.0}));

  const auto z1z2 = srpave::MultiDegree::from_multi_affine(MultiAffine::monomial(2, 3));
  CHECK(pv::barrier_phi(z1z2, 0, {1.0, 2.0}) == doctest::Approx(1.0));
  CHECK(pv::barrier_phi(z1z2, 1, {1.0, 2.0}) == doctest::Approx(0.5));
  CHECK(code_of([&] { pv::barrier_phi(z1z2, 0, {0.0, 2.0}); }) == Errc::PoleAtPoint);

  // Chain rule: Phi of g^r at b1 is r d_i g(b1) / g(b1).
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const MultiAffine g = srpave::stable::char_poly_matrix(oracle::random_psd(n, rng));
    const int r = 2 + static_cast<int>(rng() % 2);
    const double b = 1.0 + 0.5 * static_cast<double>(1 + rng() % 10);
    const std::vector<double> u(static_cast<std::size_t>(n), b);
    const auto st = pv::barrier_start(g, r, b);
    for (int i = 0; i < n; ++i) {
      const double phi = pv::barrier_phi(st.p, i, u);
      CHECK(phi > 0.0);
      CHECK(phi == doctest::Approx(r * g.partial(srpave::bit(i)).eval(u) / g.eval(u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("barrier steps by hand in one variable") {
  const double a = 0.3;
  const MultiAffine g = product_kernel({a});
  for (double b : {1.1, 1.5, 2.0, 3.5}) {
    const auto st = pv::barrier_start(g, 2, b);
    const auto next = pv::barrier_step(st, 0, 2);
    const double phi = 2.0 / (b - a);
    const double delta = 0.5 / (phi - 1.0 / b);
    REQUIRE(next.history.size() == 1);
    CHECK(next.history[0].delta == doctest::Approx(delta).epsilon(1e-12));
    CHECK(next.u[0] == doctest::Approx(b - delta).epsilon(1e-12));
    // d/dz (z-a)^2 = 2(z-a), whose root a stays below the new point.
    CHECK(next.u[0] > a);
  }

  // Hand infimum of f(b) = b - (1/2)/(2/(b-a) - 1/b) over b > 1. For this a
  // f increases on (1, 4], so the infimum is the limit f(1) = 1 - (1-a)/(2(1+a));
  // a dense scan confirms nothing smaller appears.
  const auto f = [&](double b) { return b - 0.5 / (2.0 / (b - a) - 1.0 / b); };
  const double hand = 1.0 - (1.0 - a) / (2.0 * (1.0 + a));
  for (int i = 1; i <= 30000; ++i) CHECK(f(1.0 + 3.0 * i / 30000.0) >= hand);
  const auto cert = pv::certified_maxroot_bound(g, 2);
  CHECK(cert.bound == doctest::Approx(hand).epsilon(1e-7));
  CHECK(cert.bound >= a - 1e-12);
  CHECK(cert.bound <= pv::lr_bound(2, 0.25) + 1e-9);
  CHECK(cert.phi_bound_holds);
  CHECK(cert.uniform_delta_holds);

  // a = 0: the step lands exactly on the bound of the independent case.
  const auto zero = pv::certified_maxroot_bound(product_kernel({0.0}), 2);
  CHECK(zero.bound >= -1e-12);
}

TEST_CASE("barrier iteration on kernels") {
  // Diagonal K = alpha I.
  for (double alpha : {0.05, 0.1, 0.2, 0.25}) {
    const MultiAffine g = srpave::stable::char_poly_matrix(Matrix::Identity(3, 3) * alpha);
    const auto cert = pv::certified_maxroot_bound(g, 2);
    INFO("alpha " << alpha);
    CHECK(cert.bound <= pv::lr_bound(2, alpha) + 1e-3);
    CHECK(cert.bound >= rr::maxroot(pv::g_r_differential(g, 2)) - 1e-9);
  }

  // Refining the grid never makes the bound worse.
  const MultiAffine g = srpave::stable::char_poly_matrix(Matrix::Identity(2, 2) * 0.2);
  pv::BarrierOptions coarse;
  coarse.grid_points = 10;
  coarse.refine_iters = 0;
  pv::BarrierOptions fine = coarse;
  fine.grid_points = 200;
  fine.refine_iters = 60;
  CHECK(pv::certified_maxroot_bound(g, 2, fine).bound <= pv::certified_maxroot_bound(g, 2, coarse).bound + 1e-12);

  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const int r = trial % 3 == 0 ? 3 : 2;
    const int n = 1 + static_cast<int>(rng() % 4);
    const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
    const MultiAffine gk = srpave::stable::char_poly_matrix(kernel_with_diag_cap(n, cap, rng));
    const double al = pv::diagonal_alpha(gk);
    pv::BarrierOptions opts;
    opts.grid_points = 40;
    opts.refine_iters = 30;
    const auto cert = pv::certified_maxroot_bound(gk, r, opts);
    INFO("trial " << trial << " n=" << n << " r=" << r << " alpha=" << al);
    CHECK(cert.bound >= rr::maxroot(pv::g_r_differential(gk, r)) - 1e-9);
    CHECK(cert.bound <= pv::lr_bound(r, al) + 1e-3);
    CHECK(cert.phi_bound_holds);
    CHECK(cert.uniform_delta_holds);
    CHECK(cert.steps_checked == cert.runs * n);

    // Each step leaves every barrier value no larger; the general mode,
    // which reads lambda_r off the section, agrees on these inputs to the
    // extent that it never moves less than the kernel-power mode allows.
    auto st = pv::barrier_start(gk, r, cert.best_b);
    for (int j = 0; j < n; ++j) {
      st = pv::barrier_step(st, j, r);
      const auto& rec = st.history.back();
      for (std::size_t i = 0; i < rec.phi_after.size(); ++i) CHECK(rec.phi_after[i] <= rec.phi_before[i] * (1 + 1e-9));
      CHECK(pv::is_above_roots(st.p, st.u));
    }
  }
}

TEST_CASE("two-stage zero-diagonal paving") {
  // Monomial: all diagonal roots are 0.
  const auto mono = pv::two_stage_paving(MultiAffine::monomial(5, srpave::full_mask(5)), 4, 1.0);
  mono.partition.validate(5);
  CHECK(mono.num_parts == 16);
  CHECK(mono.max_part_value() <= 1e-12);

  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    // Centered rank-one projection: K - diag(K) for K = v v^T, |v| = 1.
    std::normal_distribution<double> gauss(0.0, 1.0);
    srpave::linalg::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    v.normalize();
    Matrix m = v * v.transpose();
    m.diagonal().setZero();
    const double lambda = srpave::linalg::symmetric_op_norm(m);
    const MultiAffine xi = srpave::stable::char_poly_matrix(m);
    for (int r : {4, 5}) {
      const auto res = pv::two_stage_paving(xi, r, lambda);
      INFO("trial " << trial << " n=" << n << " r=" << r);
      res.partition.validate(n);
      CHECK(res.num_parts == r * r);
      CHECK(res.part_labels.size() == res.partition.parts.size());
      CHECK(res.certified);
      CHECK(res.max_part_value() <= pv::zero_diag_bound(r, lambda) + 1e-8);
      for (std::size_t j = 0; j < res.partition.parts.size(); ++j) {
        const Matrix sub = srpave::linalg::principal_submatrix(m, res.partition.parts[j]);
        CHECK(res.per_part_maxroot[j] == doctest::Approx(srpave::linalg::symmetric_op_norm(sub)).epsilon(1e-7));
        CHECK(res.part_labels[j] >= 0);
        CHECK(res.part_labels[j] < r * r);
      }
    }
  }

  MultiAffine bad = srpave::stable::char_poly_matrix(Matrix::Identity(3, 3) * 0.1);
  CHECK(code_of([&] { pv::two_stage_paving(bad, 4, 1.0); }) == Errc::HypothesisViolated);
  CHECK(code_of([&] { pv::two_stage_paving(MultiAffine::monomial(2, 3), 3, 1.0); }) == Errc::ParamOutOfRange);
}

TEST_CASE("matrix paving") {
  const auto diag = pv::matrix_paving(Matrix::Identity(3, 3) * 0.2, {2, 0.25, 1.0});
  for (std::size_t j = 0; j < diag.op_norms.size(); ++j) {
    if (diag.result.partition.parts[j] != 0) CHECK(diag.op_norms[j] == doctest::Approx(0.2));
  }

  Matrix half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  CHECK(code_of([&] { pv::matrix_paving(half, {2, 0.5, 1.0}); }) == Errc::HypothesisViolated);
  CHECK(code_of([&] { pv::matrix_paving(half, {3, 0.5, 1.0}); }) == Errc::HypothesisViolated);
  const auto r4 = pv::matrix_paving(half, {4, 0.5, 1.0});
  CHECK(r4.result.max_part_value() == doctest::Approx(0.5));
  CHECK(r4.result.max_part_value() <= pv::lr_bound(4, 0.5));
  CHECK(r4.max_norm_mismatch < 1e-8);

  Matrix big = Matrix::Identity(2, 2) * 1.5;
  CHECK(code_of([&] { pv::matrix_paving(big, {2, 0.25, 1.0}); }) == Errc::HypothesisViolated);

  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int r = 2 + static_cast<int>(rng() % 3);
    const double cap = static_cast<double>((r - 1) * (r - 1)) / (r * r);
    const Matrix k = kernel_with_diag_cap(n, cap, rng);
    const auto rep = pv::matrix_paving(k, {r, cap, 1.0});
    CHECK(rep.max_norm_mismatch < 1e-8);
    CHECK(rep.result.certified);
  }
}
