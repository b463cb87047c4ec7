#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "srpave/poly1d.hpp"

namespace srpave {

using Rational = boost::multiprecision::cpp_rational;
using ExactPoly = BasicPoly<Rational>;

/// Exact conversion: every finite double is a dyadic rational.
ExactPoly to_exact(const UniPoly& p);
UniPoly to_double(const ExactPoly& p);

namespace exact {

/// Canonical Sturm chain p, p', -rem(p, p'), ...
std::vector<ExactPoly> sturm_chain(const ExactPoly& p);

/// Number of distinct real roots of p in (a, b].
int sturm_count(const std::vector<ExactPoly>& chain, const Rational& a, const Rational& b);

/// Number of distinct real roots over the whole line.
int distinct_real_roots(const ExactPoly& p);

/// p is real-rooted iff the number of distinct real roots equals the degree
/// of its square-free part p / gcd(p, p').
bool is_real_rooted(const ExactPoly& p);

/// Sturm bisection: disjoint isolating intervals refined to `width`, one per
/// distinct root, returned as midpoints in non-increasing order.
std::vector<double> distinct_roots(const ExactPoly& p, double width = 1e-12);

}  // namespace exact
}  // namespace srpave
