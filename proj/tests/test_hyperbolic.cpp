#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "srpave/hyperbolic.hpp"
#include "srpave/paving.hpp"
#include "srpave/stable_poly.hpp"

using srpave::Errc;
using srpave::Error;
using srpave::Mask;
using srpave::MultiAffine;
using srpave::MultiDegree;
using srpave::linalg::Matrix;
namespace hyp = srpave::hyp;
namespace sr = srpave::sr;
namespace rr = srpave::rr;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) { return oracle::max_abs_diff(a, b); }

std::vector<double> sorted_down(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

std::vector<double> negated(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

std::vector<double> gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = g(rng);
  return v;
}

hyp::HomogeneousPoly product_of_variables(int n) {
  MultiAffine p(n);
  p.set_coeff(srpave::full_mask(n), 1.0);
  return hyp::HomogeneousPoly(MultiDegree::from_multi_affine(p), n);
}

hyp::HomogeneousPoly sum_of_squares() {
  MultiDegree p({2, 2});
  p.set_coeff({2, 0}, 1.0);
  p.set_coeff({0, 2}, 1.0);
  return hyp::HomogeneousPoly(p, 2);
}

const sr::Family kFamilies[] = {sr::Family::Independent, sr::Family::Determinantal, sr::Family::Conditioned,
                                sr::Family::Field, sr::Family::SpanningTree};

}  // namespace

TEST_CASE("homogenization") {
  // z - a  ->  z - a w
  const MultiAffine lin = MultiAffine::linear_product({0.7});
  const auto h1 = hyp::homogenize(lin);
  CHECK(h1.degree() == 1);
  CHECK(h1.poly().coeff({1, 0}) == 1.0);
  CHECK(h1.poly().coeff({0, 1}) == doctest::Approx(-0.7));

  // z1 z2 - 1  ->  z1 z2 - w^2
  MultiAffine q(2);
  q.set_coeff(3, 1.0);
  q.set_coeff(0, -1.0);
  const auto h2 = hyp::homogenize(q);
  CHECK(h2.degree() == 2);
  CHECK(h2.poly().coeff({1, 1, 0}) == 1.0);
  CHECK(h2.poly().coeff({0, 0, 2}) == -1.0);
  CHECK(h2.poly().coeff({1, 0, 1}) == 0.0);

  CHECK_THROWS_AS(hyp::HomogeneousPoly(MultiDegree::from_multi_affine(q), 2), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.3, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const MultiAffine g = hyp::random_stable(n, rng);
    const auto h = hyp::homogenize(g);
    CHECK(h.num_vars() == n + 1);
    const MultiDegree back = hyp::dehomogenize(h);
    CHECK(max_diff(back.coeffs(), MultiDegree::from_multi_affine(g).coeffs()) == 0.0);
    std::vector<double> z = gaussian(n, rng);
    std::vector<double> z1 = z;
    z1.push_back(1.0);
    CHECK(h.eval(z1) == doctest::Approx(oracle::eval_terms(g, z)).epsilon(1e-12));
    // h(s z, s w) = s^d h(z, w)
    const double s = unif(rng);
    std::vector<double> zw = gaussian(n + 1, rng);
    std::vector<double> szw = zw;
    for (double& x : szw) x *= s;
    CHECK(h.eval(szw) == doctest::Approx(std::pow(s, h.degree()) * h.eval(zw)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("hyperbolicity probe") {
  const auto prod = product_of_variables(4);
  CHECK_FALSE(hyp::hyperbolicity_probe(prod, {1, 1, 1, 1}, 200, 1).falsified);

  const auto sq = sum_of_squares();
  const auto v = hyp::hyperbolicity_probe(sq, {1.0, 0.3}, 50, 2);
  CHECK(v.falsified);
  CHECK(v.positive_at_e);
  CHECK(hyp::hyperbolicity_probe(sq, {0.0, 1.0}, 50, 2).falsified);

  // p(e) < 0 is falsified immediately; p(e) = 0 is a precondition failure.
  CHECK(hyp::hyperbolicity_probe(prod, {-1, 1, 1, 1}, 5, 1).falsified);
  CHECK_THROWS_AS(hyp::hyperbolicity_probe(prod, {0, 1, 1, 1}, 5, 1), Error);

  // Homogenized stable polynomials are hyperbolic in every (e, 0), e > 0.
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto h = hyp::homogenize(hyp::random_stable(n, rng));
    std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = (trial % 2) ? 1.0 : 0.1 + expo(rng);
    CHECK_FALSE(hyp::hyperbolicity_probe(h, e, 40, static_cast<std::uint64_t>(trial)).falsified);
  }
}

TEST_CASE("lambda and the cone") {
  const auto prod = product_of_variables(3);
  const std::vector<double> one{1, 1, 1};
  CHECK(max_diff(hyp::lambda_at(prod, one, {0, 0, 0}), {0, 0, 0}) == 0.0);
  // prod(t + v_i) has roots -v_i.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = gaussian(3, rng);
    CHECK(max_diff(hyp::lambda_at(prod, one, v), sorted_down(negated(v))) < 1e-12);
  }

  // The cone of prod z_i in direction 1 is the open positive orthant.
  CHECK(hyp::cone_membership(prod, one, one));
  CHECK_FALSE(hyp::cone_membership(prod, one, {1, 0, 2}));  // boundary
  CHECK_FALSE(hyp::cone_membership(prod, one, {1, -0.1, 2}));
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = gaussian(3, rng);
    CHECK(hyp::cone_membership(prod, one, x) == std::all_of(x.begin(), x.end(), [](double a) { return a > 0; }));
  }

  // Convexity: combinations of members stay inside, for homogenized stable p.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const MultiAffine g = hyp::random_stable(n, rng);
    const auto h = hyp::homogenize(g);
    std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
    std::fill(e.begin(), e.begin() + n, 1.0);
    CHECK(hyp::cone_membership(h, e, e));
    std::vector<std::vector<double>> members;
    for (int k = 0; k < 40 && members.size() < 6; ++k) {
      std::vector<double> x = gaussian(n + 1, rng);
      for (double& a : x) a *= 3.0;
      if (hyp::cone_membership(h, e, x)) members.push_back(x);
    }
    for (std::size_t a = 0; a + 1 < members.size(); ++a) {
      const double s = unif(rng);
      std::vector<double> mix(members[a].size());
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = s * members[a][i] + (1 - s) * members[a + 1][i];
      CHECK(hyp::cone_membership(h, e, mix, 0.0));
    }
  }
}

TEST_CASE("cone membership does not depend on the direction") {
  std::mt19937_64 rng(21);
  int tested = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const MultiAffine g = hyp::random_stable(1 + static_cast<int>(rng() % 5), rng);
    const auto sweep = hyp::cone_direction_invariance(g, 20, static_cast<std::uint64_t>(trial));
    CHECK(sweep.ok());
    tested += sweep.tested;
  }
  CHECK(tested > 1500);
}

TEST_CASE("hyperbolic majorization") {
  std::mt19937_64 rng(8);
  // prod z_i: sorted(v + u) is majorized by sorted(v) + sorted(u).
  const auto prod = product_of_variables(5);
  const std::vector<double> one(5, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = gaussian(5, rng);
    const auto u = gaussian(5, rng);
    CHECK(hyp::hyperbolic_majorization_check(prod, one, v, u));
    std::vector<double> vu(5), sum(5);
    const auto sv = sorted_down(v), su = sorted_down(u);
    for (int i = 0; i < 5; ++i) {
      vu[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + u[static_cast<std::size_t>(i)];
      sum[static_cast<std::size_t>(i)] = sv[static_cast<std::size_t>(i)] + su[static_cast<std::size_t>(i)];
    }
    CHECK(rr::majorizes(sum, vu));
  }
  // v = 0: lambda_u is majorized by itself.
  CHECK(hyp::hyperbolic_majorization_check(prod, one, std::vector<double>(5, 0.0), gaussian(5, rng), 1e-12));

  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<double> e;
    hyp::HomogeneousPoly h(MultiDegree(), 0);
    if (trial % 4 == 0) {
      const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      h = hyp::elementary_symmetric(n, k);
      e.assign(static_cast<std::size_t>(n), 1.0);
    } else {
      h = hyp::homogenize(hyp::random_stable(n, rng));
      e.assign(static_cast<std::size_t>(n + 1), 0.0);
      std::fill(e.begin(), e.begin() + n, 1.0);
    }
    const auto v = gaussian(h.num_vars(), rng);
    const auto u = gaussian(h.num_vars(), rng);
    CHECK(hyp::hyperbolic_majorization_check(h, e, v, u, 1e-8));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("F construction") {
  // Independent process: diag(xi) = x^n and lambda(g) = p sorted down.
  const auto ind = sr::independent({0.2, 0.9, 0.5});
  const auto fi = hyp::f_construction(ind);
  CHECK(max_diff(fi.lambda_xi, {0, 0, 0}) < 1e-12);
  CHECK(max_diff(fi.lambda_g, {0.9, 0.5, 0.2}) < 1e-12);
  CHECK(fi.majorized);
  CHECK(fi.f.num_vars() == 7);
  CHECK(fi.f.degree() == 3);

  // Rank-one projection on two points: g = z1 z2 - (z1 + z2)/2, xi = z1 z2 - 1/4.
  Matrix k(2, 2);
  k << 0.5, 0.5, 0.5, 0.5;
  const auto fp = hyp::f_construction(sr::determinantal_process(k));
  CHECK(max_diff(fp.lambda_g, {1.0, 0.0}) < 1e-12);
  CHECK(max_diff(fp.lambda_xi, {0.5, -0.5}) < 1e-12);
  CHECK(max_diff(fp.p_down, {0.5, 0.5}) < 1e-12);
  CHECK(fp.majorized);
  CHECK(fp.margin == doctest::Approx(0.0).scale(1.0));
  // By hand: F = (z1 + u1)(z2 + u2) - w^2 / 4.
  CHECK(fp.f.poly().coeff({1, 1, 0, 0, 0}) == 1.0);
  CHECK(fp.f.poly().coeff({0, 0, 0, 0, 2}) == doctest::Approx(-0.25));
  CHECK(fp.f.poly().coeff({0, 0, 1, 1, 0}) == 1.0);
  CHECK(fp.f.poly().coeff({0, 1, 1, 0, 0}) == 1.0);
  CHECK(fp.f.poly().coeff({0, 0, 1, 0, 1}) == 0.0);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto fam = kFamilies[trial % 5];
    const auto x = sr::random_process(fam, 1 + static_cast<int>(rng() % 5), rng);
    if (x.n() > 5) continue;
    INFO(std::string(sr::to_string(fam)) << " n=" << x.n());
    const auto fc = hyp::f_construction(x);
    CHECK(fc.specialization_error <= 1e-8);
    CHECK(fc.majorized);
    // The polynomial-only overload agrees.
    const auto fx = hyp::f_construction(sr::centered_kernel(x), sr::marginals(x));
    CHECK(max_diff(fx.lambda_g, fc.lambda_g) < 1e-8);
    // w = 0 section: F(t e + (z, u, 0)) = prod (t + z_i + u_i).
    const int n = x.n();
    std::vector<double> a = gaussian(2 * n + 1, rng);
    a.back() = 0.0;
    std::vector<double> lin(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) lin[static_cast<std::size_t>(i)] = -(a[static_cast<std::size_t>(i)] + a[static_cast<std::size_t>(n + i)]);
    CHECK(srpave::relative_coeff_distance(fc.f.section(fc.e, a), MultiAffine::linear_product(lin).diagonalize()) < 1e-12);
    if (trial % 10 == 0) {
      CHECK_FALSE(hyp::hyperbolicity_probe(fc.f, fc.e, 30, static_cast<std::uint64_t>(trial)).falsified);
    }
  }

  const auto xi = sr::centered_kernel(ind);
  CHECK_THROWS_AS(hyp::f_construction(xi, {0.2, 0.9}), Error);
}

TEST_CASE("above the roots: exact oracles") {
  // prod (z_i - a_i): Ab is {u > a}.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = gaussian(3, rng);
    const MultiAffine p = MultiAffine::linear_product(a);
    std::vector<double> u = gaussian(3, rng);
    for (std::size_t i = 0; i < 3; ++i) u[i] += a[i] + 0.3;
    bool expect = true;
    for (std::size_t i = 0; i < 3; ++i) expect = expect && u[i] > a[i] + 1e-9;
    CHECK(srpave::paving::is_above_roots(p, u) == expect);
  }
  // det(Z - K): Ab is {u : diag(u) - K positive definite}.
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Matrix k = oracle::random_psd(n, rng, -1.0, 1.0);
    const MultiAffine p = srpave::stable::char_poly_matrix(k);
    std::vector<double> u = gaussian(n, rng);
    for (double& x : u) x += 0.8;
    Matrix m = -k;
    for (int i = 0; i < n; ++i) m(i, i) += u[static_cast<std::size_t>(i)];
    const double low = srpave::linalg::symmetric_eigenvalues(m).minCoeff();
    if (std::abs(low) < 1e-8) continue;
    CHECK(srpave::paving::is_above_roots(p, u) == (low > 0));
  }
}

TEST_CASE("above-the-roots lemmas on random stable polynomials") {
  std::mt19937_64 rng(99);
  int tested_a = 0, tested_b = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const MultiAffine p = hyp::random_stable(1 + static_cast<int>(rng() % 5), rng);
    const auto a = hyp::ab_convexity_test(p, 10, static_cast<std::uint64_t>(trial));
    const auto b = hyp::boundary_lemma_test(p, 10, static_cast<std::uint64_t>(trial));
    CHECK(a.ok());
    CHECK(b.ok());
    tested_a += a.tested;
    tested_b += b.tested;
  }
  CHECK(tested_a > 2000);
  CHECK(tested_b > 4000);
}
