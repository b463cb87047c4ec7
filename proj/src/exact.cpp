#include "srpave/exact.hpp"

#include <algorithm>
#include <functional>

namespace srpave {

ExactPoly to_exact(const UniPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (double a : p.coeffs()) c.emplace_back(a);
  return ExactPoly(std::move(c));
}

UniPoly to_double(const ExactPoly& p) {
  std::vector<double> c;
  c.reserve(p.coeffs().size());
  for (const Rational& a : p.coeffs()) c.push_back(static_cast<double>(a));
  return UniPoly(std::move(c));
}

namespace exact {
namespace {

int sign_of(const Rational& v) { return v.sign(); }

int variations_at(const std::vector<ExactPoly>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const ExactPoly& s : chain) {
    const int sg = sign_of(s(x));
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

int variations_at_infinity(const std::vector<ExactPoly>& chain, bool positive) {
  int changes = 0;
  int last = 0;
  for (const ExactPoly& s : chain) {
    int sg = sign_of(s.leading());
    if (!positive && s.degree() % 2 == 1) sg = -sg;
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

Rational cauchy_bound(const ExactPoly& p) {
  Rational m = 0;
  for (int k = 0; k < p.degree(); ++k) {
    Rational a = abs(p.coeff(k) / p.leading());
    if (a > m) m = a;
  }
  return m + 1;
}

}  // namespace

std::vector<ExactPoly> sturm_chain(const ExactPoly& p) {
  std::vector<ExactPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  ExactPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    auto [q, r] = ExactPoly::divmod(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

int sturm_count(const std::vector<ExactPoly>& chain, const Rational& a, const Rational& b) {
  return variations_at(chain, a) - variations_at(chain, b);
}

int distinct_real_roots(const ExactPoly& p) {
  const auto chain = sturm_chain(p);
  return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

bool is_real_rooted(const ExactPoly& p) {
  if (p.is_zero() || p.degree() == 0) return true;
  const ExactPoly g = ExactPoly::gcd(p, p.derivative());
  return distinct_real_roots(p) == p.degree() - g.degree();
}

std::vector<double> distinct_roots(const ExactPoly& p, double width) {
  std::vector<double> out;
  if (p.degree() < 1) return out;
  const auto chain = sturm_chain(p);
  const Rational bound = cauchy_bound(p);
  const Rational w(width);
  std::function<void(const Rational&, const Rational&, int)> isolate =
      [&](const Rational& a, const Rational& b, int count) {
        if (count == 0) return;
        if (count == 1 && b - a <= w) {
          out.push_back(static_cast<double>((a + b) / 2));
          return;
        }
        const Rational mid = (a + b) / 2;
        const int upper = sturm_count(chain, mid, b);
        isolate(mid, b, upper);
        isolate(a, mid, count - upper);
      };
  const Rational lo = -bound;
  isolate(lo, bound, sturm_count(chain, lo, bound));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace exact
}  // namespace srpave
