#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "srpave/stable_poly.hpp"

using srpave::Errc;
using srpave::Error;
using srpave::Mask;
using srpave::MultiAffine;
using srpave::MultiDegree;
using srpave::UniPoly;
using srpave::linalg::Matrix;
namespace stable = srpave::stable;
namespace rr = srpave::rr;

namespace {

// z1 z2 - (z1 + z2)/2, the kernel of the rank-one projection [[1/2,1/2],[1/2,1/2]].
MultiAffine rank_one_kernel() { return MultiAffine(2, {0.0, -0.5, -0.5, 1.0}); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an srpave::Error");
  return Errc::InvalidInput;
}

std::vector<double> random_point(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST_CASE("evaluation") {
  const MultiAffine g = rank_one_kernel();
  CHECK(g.eval({1.0, 1.0}) == doctest::Approx(0.0));
  CHECK(g.eval({0.0, 0.0}) == 0.0);
  CHECK(code_of([&] { g.eval({1.0}); }) == Errc::DimensionMismatch);

  std::mt19937_64 rng(1);
  for (int n = 1; n <= 6; ++n) {
    const Matrix k = oracle::random_psd(n, rng);
    const MultiAffine chi = stable::char_poly_matrix(k);
    const Matrix id = Matrix::Identity(n, n);
    CHECK(chi.eval(std::vector<double>(static_cast<std::size_t>(n), 1.0)) ==
          doctest::Approx((id - k).determinant()).epsilon(1e-10));
    const auto x = random_point(n, rng);
    CHECK(chi.eval(x) == doctest::Approx(oracle::eval_terms(chi, x)).epsilon(1e-10));
    CHECK(chi.eval(x) == doctest::Approx(oracle::char_poly_at(k, x)).epsilon(1e-9));
  }
}

TEST_CASE("partial derivatives and restriction") {
  const MultiAffine g = rank_one_kernel();
  CHECK(MultiAffine::monomial(2, 3).partial(3) == MultiAffine::constant(2, 1.0));
  CHECK(g.partial(0) == g);
  CHECK(g.partial(1) == MultiAffine(2, {-0.5, 0.0, 1.0, 0.0}));  // z2 - 1/2
  CHECK(MultiAffine::monomial(2, 3).restrict_var(1, 0.0).is_zero());
  CHECK(g.restrict_var(1, 1.0) == MultiAffine(2, {-0.5, 0.5, 0.0, 0.0}));  // z1/2 - 1/2

  std::mt19937_64 rng(2);
  const int n = 5;
  const MultiAffine p = stable::char_poly_matrix(oracle::random_psd(n, rng));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_point(n, rng);
    const int i = static_cast<int>(rng() % n);
    // Exact finite difference for multi-affine polynomials.
    auto x1 = x, x0 = x;
    x1[static_cast<std::size_t>(i)] = 1.0;
    x0[static_cast<std::size_t>(i)] = 0.0;
    CHECK(p.partial(srpave::bit(i)).eval(x) == doctest::Approx(p.eval(x1) - p.eval(x0)).epsilon(1e-10));
    const Mask a = static_cast<Mask>(rng() % 32);
    const Mask b = static_cast<Mask>(rng() % 32) & ~a;
    CHECK(stable::trim_relative(UniPoly{}).is_zero());
    CHECK(srpave::relative_coeff_distance(p.partial(a).partial(b), p.partial(a | b)) == 0.0);
    const int j = (i + 1) % n;
    CHECK(srpave::relative_coeff_distance(p.partial(srpave::bit(i)).restrict_var(j, 0.3),
                                          p.restrict_var(j, 0.3).partial(srpave::bit(i))) < 1e-15);
  }
}

TEST_CASE("diagonalization") {
  CHECK(rank_one_kernel().diagonalize() == UniPoly({0.0, -1.0, 1.0}));
  CHECK(MultiAffine::monomial(4, 15).diagonalize() == UniPoly::monomial(4));
  const UniPoly d = MultiAffine::linear_product({0.2, 0.7}).diagonalize();
  CHECK(srpave::relative_coeff_distance(d, UniPoly::from_roots({0.2, 0.7})) < 1e-15);
}

TEST_CASE("inversion, reflection and affine substitution") {
  const MultiAffine g = rank_one_kernel();
  CHECK(MultiAffine::monomial(3, 7).inversion() == MultiAffine::constant(3, 1.0));
  CHECK(g.inversion() == MultiAffine(2, {1.0, -0.5, -0.5, 0.0}));
  CHECK(g.inversion().inversion() == g);
  CHECK(g.reflect() == MultiAffine(2, {0.0, 0.5, 0.5, 1.0}));
  CHECK(g.reflect().reflect() == g);
  CHECK(MultiAffine(1, {-0.3, 1.0}).reflect() == MultiAffine(1, {0.3, 1.0}));

  CHECK(g.affine_sub({1.0, 1.0}, {0.0, 0.0}) == g);
  CHECK(MultiAffine(1, {-0.3, 1.0}).shifted({0.3}) == MultiAffine(1, {0.0, 1.0}));
  // g(z - 1) = z1 z2 - 3(z1 + z2)/2 + 2
  CHECK(g.shifted({-1.0, -1.0}) == MultiAffine(2, {2.0, -1.5, -1.5, 1.0}));
  CHECK(code_of([&] { g.affine_sub({0.0, 1.0}, {0.0, 0.0}); }) == Errc::ZeroScale);

  std::mt19937_64 rng(3);
  const MultiAffine p = stable::char_poly_matrix(oracle::random_psd(4, rng));
  const auto s = random_point(4, rng);
  const auto h = random_point(4, rng);
  const auto x = random_point(4, rng);
  std::vector<double> y(4);
  for (std::size_t i = 0; i < 4; ++i) y[i] = s[i] * x[i] + h[i];
  CHECK(p.affine_sub(s, h).eval(x) == doctest::Approx(p.eval(y)).epsilon(1e-10));
  // Reflection negates the diagonal roots.
  auto r = rr::roots(p.diagonalize());
  auto rf = rr::roots(p.reflect().diagonalize());
  std::reverse(rf.begin(), rf.end());
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(rf[i] == doctest::Approx(-r[i]));
}

TEST_CASE("characteristic polynomial of a matrix") {
  CHECK(stable::char_poly_matrix(Matrix::Zero(3, 3)) == MultiAffine::monomial(3, 7));
  CHECK(srpave::relative_coeff_distance(stable::char_poly_matrix(Matrix::Identity(3, 3)),
                                        MultiAffine::linear_product({1.0, 1.0, 1.0})) == 0.0);
  Matrix k(2, 2);
  k << 0.5, 0.5, 0.5, 0.5;
  CHECK(srpave::relative_coeff_distance(stable::char_poly_matrix(k), rank_one_kernel()) < 1e-15);
  Matrix bad(2, 2);
  bad << 0.5, 0.1, 0.2, 0.5;
  CHECK(code_of([&] { stable::char_poly_matrix(bad); }) == Errc::DimensionMismatch);

  // [z^{A^c}] chi[K] = (-1)^{|A|} det(K_A), against the Leibniz determinant.
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 6; ++n) {
    const Matrix km = oracle::random_psd(n, rng);
    const MultiAffine chi = stable::char_poly_matrix(km);
    for (Mask a = 0; a < chi.size(); ++a) {
      const double det = a == 0 ? 1.0 : oracle::leibniz_det(srpave::linalg::principal_submatrix(km, a));
      const double want = (srpave::popcount(a) % 2 == 0) ? det : -det;
      CHECK(chi.kernel_coeff(a) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("support convexity and coefficient signs") {
  MultiAffine full(3, std::vector<double>(8, 1.0));
  CHECK(stable::support_convexity_check(full));
  CHECK(stable::support_convexity_check(MultiAffine::monomial(2, 3)));
  MultiAffine gap(2, {1.0, 0.0, 0.0, 1.0});
  CHECK_FALSE(stable::support_convexity_check(gap));
  std::mt19937_64 rng(5);
  CHECK(stable::support_convexity_check(stable::char_poly_matrix(oracle::random_psd(5, rng))));

  CHECK(stable::coefficient_sign_check(MultiAffine::monomial(2, 3)) == true);
  CHECK(stable::coefficient_sign_check(rank_one_kernel()) == true);
  // z1 z2 + z1: diagonal x^2 + x has the root -1, so the precondition fails.
  CHECK_FALSE(stable::coefficient_sign_check(MultiAffine(2, {0.0, 1.0, 0.0, 1.0})).has_value());
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(stable::coefficient_sign_check(stable::char_poly_matrix(oracle::random_psd(4, rng))) == true);
  }
}

TEST_CASE("stability falsifier") {
  const auto v = stable::stability_falsifier(MultiAffine(2, {1.0, 0.0, 0.0, 1.0}), 10, 1);
  CHECK(v.falsified);
  CHECK(v.direction == std::vector<double>{1.0, 1.0});
  CHECK_FALSE(stable::stability_falsifier(MultiAffine::constant(3, 1.0), 10, 1).falsified);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const MultiAffine chi = stable::char_poly_matrix(oracle::random_psd(n, rng));
    CHECK_FALSE(stable::stability_falsifier(chi, 50, rng()).falsified);
  }
  MultiDegree sq = power(MultiDegree::from_multi_affine(rank_one_kernel()), 2);
  CHECK_FALSE(stable::stability_falsifier(sq, 50, 3).falsified);
}

TEST_CASE("bivariate exact criterion agrees with the falsifier") {
  CHECK(stable::bivariate_stability_exact(rank_one_kernel()));
  CHECK_FALSE(stable::bivariate_stability_exact(MultiAffine(2, {1.0, 0.0, 0.0, 1.0})));
  CHECK(stable::bivariate_stability_exact(MultiAffine(2, {0.0, 1.0, 1.0, 0.0})));
  CHECK(code_of([] { stable::bivariate_stability_exact(MultiAffine(3)); }) == Errc::WrongArity);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  int unstable = 0;
  int caught = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    MultiAffine p(2, {g(rng), g(rng), g(rng), g(rng)});
    const bool exact = stable::bivariate_stability_exact(p);
    const bool falsified = stable::stability_falsifier(p, 40, rng()).falsified;
    CHECK_FALSE((exact && falsified));
    if (!exact) {
      ++unstable;
      caught += falsified;
    }
  }
  MESSAGE("falsifier caught " << caught << " of " << unstable << " unstable bivariate polynomials");
}

TEST_CASE("multi-degree arithmetic") {
  // (z - a)^2
  const double a = 0.4;
  MultiDegree lin({1});
  lin.set_coeff({0}, -a);
  lin.set_coeff({1}, 1.0);
  const MultiDegree sq = power(lin, 2);
  CHECK(sq.coeff({0}) == doctest::Approx(a * a));
  CHECK(sq.coeff({1}) == doctest::Approx(-2 * a));
  CHECK(sq.coeff({2}) == doctest::Approx(1.0));

  const MultiDegree g = MultiDegree::from_multi_affine(rank_one_kernel());
  const MultiDegree one = power(g, 0);
  CHECK(multiply(g, one).coeffs() == g.coeffs());
  CHECK(power(g, 2).eval({1.0, 1.0}) == doctest::Approx(0.0));

  std::mt19937_64 rng(8);
  const MultiAffine p = stable::char_poly_matrix(oracle::random_psd(3, rng));
  const MultiDegree cube = power(MultiDegree::from_multi_affine(p), 3);
  const auto x = random_point(3, rng);
  CHECK(cube.eval(x) == doctest::Approx(std::pow(p.eval(x), 3)).epsilon(1e-10));
  // Second derivative in z_1 against the closed form 6 p (d_1 p)^2 for multi-affine p.
  const double d1 = p.partial(srpave::bit(1)).eval(x);
  CHECK(cube.partial(1, 2).eval(x) == doctest::Approx(6 * p.eval(x) * d1 * d1).epsilon(1e-9));
  CHECK(cube.diagonalize()(0.37) == doctest::Approx(std::pow(p.diagonalize()(0.37), 3)).epsilon(1e-10));
  const auto e = random_point(3, rng);
  const UniPoly sec = cube.section(e, x);
  std::vector<double> pt(3);
  for (std::size_t i = 0; i < 3; ++i) pt[i] = 0.8 * e[i] + x[i];
  CHECK(sec(0.8) == doctest::Approx(cube.eval(pt)).epsilon(1e-10));
  CHECK(cube.restrict_var(2, 0.5).eval(x) ==
        doctest::Approx(cube.eval({x[0], x[1], 0.5})).epsilon(1e-10));
  CHECK(code_of([] { MultiDegree::uniform(21, 1); }) == Errc::BudgetExceeded);
}
