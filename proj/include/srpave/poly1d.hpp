#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "srpave/errors.hpp"

namespace srpave {

/// Dense univariate polynomial, coefficients in ascending degree. Trailing
/// coefficients that compare equal to zero are trimmed, so the zero
/// polynomial has an empty table and degree -1.
template <class T>
class BasicPoly {
 public:
  BasicPoly() = default;
  explicit BasicPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  BasicPoly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static BasicPoly constant(const T& a) { return BasicPoly(std::vector<T>{a}); }

  static BasicPoly monomial(int degree, const T& a = T(1)) {
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    c.back() = a;
    return BasicPoly(std::move(c));
  }

  /// lead * prod (x - r_i)
  static BasicPoly from_roots(const std::vector<T>& roots, const T& lead = T(1)) {
    std::vector<T> c{lead};
    for (const T& r : roots) {
      c.push_back(T(0));
      for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
      c[0] = -r * c[0];
    }
    return BasicPoly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }

  T coeff(int k) const {
    return (k < 0 || k > degree()) ? T(0) : c_[static_cast<std::size_t>(k)];
  }

  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  T operator()(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  BasicPoly derivative(int times = 1) const {
    if (times <= 0) return *this;
    if (degree() < times) return {};
    std::vector<T> d(c_.size() - static_cast<std::size_t>(times));
    for (std::size_t k = 0; k < d.size(); ++k) {
      T f(1);
      for (int j = 0; j < times; ++j) f *= T(static_cast<long>(k) + times - j);
      d[k] = c_[k + static_cast<std::size_t>(times)] * f;
    }
    return BasicPoly(std::move(d));
  }

  /// p(x + a)
  BasicPoly shifted(const T& a) const {
    std::vector<T> c = c_;
    const std::size_t m = c.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t k = m - 1; k > i; --k) c[k - 1] += a * c[k];
    }
    return BasicPoly(std::move(c));
  }

  /// p(-x)
  BasicPoly negated_argument() const {
    std::vector<T> c = c_;
    for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return BasicPoly(std::move(c));
  }

  BasicPoly& operator+=(const BasicPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }

  BasicPoly& operator-=(const BasicPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }

  BasicPoly& operator*=(const T& s) {
    for (T& a : c_) a *= s;
    trim();
    return *this;
  }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator*(BasicPoly a, const T& s) { return a *= s; }
  friend BasicPoly operator*(const T& s, BasicPoly a) { return a *= s; }
  friend BasicPoly operator-(BasicPoly a) { return a *= T(-1); }

  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return BasicPoly(std::move(c));
  }

  friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; T must be a field.
  static std::pair<BasicPoly, BasicPoly> divmod(const BasicPoly& num, const BasicPoly& den) {
    if (den.is_zero()) throw Error(Errc::ZeroPolynomial, "division by zero polynomial");
    std::vector<T> r = num.c_;
    const int dd = den.degree();
    if (num.degree() < dd) return {BasicPoly{}, num};
    std::vector<T> q(static_cast<std::size_t>(num.degree() - dd) + 1, T(0));
    for (int k = num.degree(); k >= dd; --k) {
      const T f = r[static_cast<std::size_t>(k)] / den.leading();
      q[static_cast<std::size_t>(k - dd)] = f;
      for (int j = 0; j <= dd; ++j) {
        r[static_cast<std::size_t>(k - dd + j)] -= f * den.c_[static_cast<std::size_t>(j)];
      }
      r[static_cast<std::size_t>(k)] = T(0);
    }
    return {BasicPoly(std::move(q)), BasicPoly(std::move(r))};
  }

  BasicPoly monic() const {
    if (is_zero()) return {};
    BasicPoly m = *this;
    const T lead = leading();
    for (T& a : m.c_) a /= lead;
    return m;
  }

  static BasicPoly gcd(BasicPoly a, BasicPoly b) {
    while (!b.is_zero()) {
      auto [q, r] = divmod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using UniPoly = BasicPoly<double>;

inline double max_abs_coeff(const UniPoly& p) {
  double m = 0.0;
  for (double a : p.coeffs()) m = std::max(m, std::abs(a));
  return m;
}

/// Largest |a_k - b_k| divided by max(1, largest |coefficient| of either).
inline double relative_coeff_distance(const UniPoly& a, const UniPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  double diff = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= d; ++k) {
    diff = std::max(diff, std::abs(a.coeff(k) - b.coeff(k)));
    scale = std::max({scale, std::abs(a.coeff(k)), std::abs(b.coeff(k))});
  }
  return diff / scale;
}

std::string to_string(const UniPoly& p);

}  // namespace srpave
