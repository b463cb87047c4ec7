#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "srpave/errors.hpp"
#include "srpave/poly1d.hpp"
#include "srpave/subset.hpp"

namespace srpave {

inline constexpr int kMaxMultiAffineVars = 20;

/// Multi-affine polynomial sum_S c_S z^S with a dense 2^n table indexed by
/// the subset bitmask S.
///
/// The kernel-style view a_A = [z^{A^c}] p is what the paving hypotheses are
/// phrased in; kernel_coeff() reads it without copying the table.
template <class T>
class BasicMultiAffine {
 public:
  BasicMultiAffine() : n_(0), c_(1, T(0)) {}

  explicit BasicMultiAffine(int n) : n_(check_n(n)), c_(std::size_t{1} << n, T(0)) {}

  BasicMultiAffine(int n, std::vector<T> coeffs) : n_(check_n(n)), c_(std::move(coeffs)) {
    if (c_.size() != (std::size_t{1} << n)) {
      throw Error(Errc::DimensionMismatch, "coefficient table must have 2^n entries");
    }
  }

  static BasicMultiAffine constant(int n, const T& a) {
    BasicMultiAffine p(n);
    p.c_[0] = a;
    return p;
  }

  static BasicMultiAffine monomial(int n, Mask s, const T& a = T(1)) {
    check_mask(s, n);
    BasicMultiAffine p(n);
    p.c_[s] = a;
    return p;
  }

  /// prod_i (z_i - roots[i])
  static BasicMultiAffine linear_product(const std::vector<T>& roots) {
    const int n = static_cast<int>(roots.size());
    BasicMultiAffine p(n);
    for (Mask s = 0; s < p.c_.size(); ++s) {
      T v(1);
      for (int i = 0; i < n; ++i) {
        if (!contains(s, i)) v *= -roots[static_cast<std::size_t>(i)];
      }
      p.c_[s] = v;
    }
    return p;
  }

  int num_vars() const { return n_; }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& coeffs() const { return c_; }
  std::vector<T>& mutable_coeffs() { return c_; }

  const T& coeff(Mask s) const { return c_[s]; }
  void set_coeff(Mask s, const T& v) { c_[s] = v; }

  /// a_A = [z^{A^c}] p
  const T& kernel_coeff(Mask a) const { return c_[complement(a, n_)]; }

  const T& top_coeff() const { return c_.back(); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& a) { return a == T(0); });
  }

  T eval(const std::vector<T>& x) const {
    check_point(x);
    std::vector<T> work = c_;
    std::size_t len = work.size();
    for (int i = n_ - 1; i >= 0; --i) {
      const std::size_t half = len / 2;
      for (std::size_t s = 0; s < half; ++s) work[s] += x[static_cast<std::size_t>(i)] * work[s + half];
      len = half;
    }
    return work[0];
  }

  /// d^A p; the result keeps n variables and no longer depends on those in A.
  BasicMultiAffine partial(Mask a) const {
    check_mask(a, n_);
    BasicMultiAffine out(n_);
    const Mask rest = complement(a, n_);
    for (Mask s = rest;; s = (s - 1) & rest) {
      out.c_[s] = c_[s | a];
      if (s == 0) break;
    }
    return out;
  }

  BasicMultiAffine restrict_var(int i, const T& beta) const {
    check_var(i);
    BasicMultiAffine out(n_);
    const Mask b = bit(i);
    for (Mask s = 0; s < c_.size(); ++s) {
      if (contains(s, i)) continue;
      out.c_[s] = c_[s] + beta * c_[s | b];
    }
    return out;
  }

  BasicPoly<T> diagonalize() const {
    std::vector<T> d(static_cast<std::size_t>(n_) + 1, T(0));
    for (Mask s = 0; s < c_.size(); ++s) d[static_cast<std::size_t>(popcount(s))] += c_[s];
    return BasicPoly<T>(std::move(d));
  }

  /// z_1...z_n p(1/z_1, ..., 1/z_n): coefficient of z^S becomes that of z^{S^c}.
  BasicMultiAffine inversion() const {
    BasicMultiAffine out(n_);
    const Mask full = full_mask(n_);
    for (Mask s = 0; s < c_.size(); ++s) out.c_[s] = c_[full & ~s];
    return out;
  }

  /// (-1)^n p(-z)
  BasicMultiAffine reflect() const {
    BasicMultiAffine out(n_);
    for (Mask s = 0; s < c_.size(); ++s) {
      out.c_[s] = ((n_ - popcount(s)) % 2 == 0) ? c_[s] : -c_[s];
    }
    return out;
  }

  /// p(scale .* z + shift)
  BasicMultiAffine affine_sub(const std::vector<T>& scale, const std::vector<T>& shift) const {
    check_point(scale);
    check_point(shift);
    for (const T& s : scale) {
      if (s == T(0)) throw Error(Errc::ZeroScale, "affine substitution with zero scale");
    }
    BasicMultiAffine out = *this;
    for (int i = 0; i < n_; ++i) {
      const Mask b = bit(i);
      const T& sc = scale[static_cast<std::size_t>(i)];
      const T& sh = shift[static_cast<std::size_t>(i)];
      for (Mask s = 0; s < c_.size(); ++s) {
        if (contains(s, i)) continue;
        const T hi = out.c_[s | b];
        out.c_[s] += hi * sh;
        out.c_[s | b] = hi * sc;
      }
    }
    return out;
  }

  BasicMultiAffine shifted(const std::vector<T>& shift) const {
    return affine_sub(std::vector<T>(static_cast<std::size_t>(n_), T(1)), shift);
  }

  /// Keeps the monomials supported inside `keep` and renumbers those
  /// variables densely (equivalently sets every other variable to 0).
  BasicMultiAffine compress(Mask keep) const {
    check_mask(keep, n_);
    const int m = popcount(keep);
    BasicMultiAffine out(m);
    for (Mask d = 0; d < out.c_.size(); ++d) out.c_[d] = c_[expand_bits(d, keep)];
    return out;
  }

  /// Inverse of compress: places this polynomial's variables at the
  /// positions of `keep` inside an n-variable polynomial.
  BasicMultiAffine embed(int n, Mask keep) const {
    if (popcount(keep) != n_) throw Error(Errc::DimensionMismatch, "embed mask size mismatch");
    check_mask(keep, n);
    BasicMultiAffine out(n);
    for (Mask d = 0; d < c_.size(); ++d) out.c_[expand_bits(d, keep)] = c_[d];
    return out;
  }

  /// Product of polynomials in disjoint variable blocks: the result has
  /// n + other.n variables, this one's first.
  BasicMultiAffine tensor(const BasicMultiAffine& other) const {
    BasicMultiAffine out(n_ + other.n_);
    for (Mask t = 0; t < other.c_.size(); ++t) {
      if (other.c_[t] == T(0)) continue;
      for (Mask s = 0; s < c_.size(); ++s) out.c_[s | (t << n_)] = c_[s] * other.c_[t];
    }
    return out;
  }

  std::vector<Mask> support(const T& tol = T(0)) const {
    std::vector<Mask> out;
    for (Mask s = 0; s < c_.size(); ++s) {
      const T a = c_[s] < T(0) ? -c_[s] : c_[s];
      if (a > tol) out.push_back(s);
    }
    return out;
  }

  BasicMultiAffine& operator+=(const BasicMultiAffine& o) {
    same_n(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  BasicMultiAffine& operator-=(const BasicMultiAffine& o) {
    same_n(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  BasicMultiAffine& operator*=(const T& s) {
    for (T& a : c_) a *= s;
    return *this;
  }
  friend BasicMultiAffine operator+(BasicMultiAffine a, const BasicMultiAffine& b) { return a += b; }
  friend BasicMultiAffine operator-(BasicMultiAffine a, const BasicMultiAffine& b) { return a -= b; }
  friend BasicMultiAffine operator*(BasicMultiAffine a, const T& s) { return a *= s; }
  friend BasicMultiAffine operator*(const T& s, BasicMultiAffine a) { return a *= s; }
  friend bool operator==(const BasicMultiAffine& a, const BasicMultiAffine& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }

 private:
  static int check_n(int n) {
    if (n < 0 || n > kMaxMultiAffineVars) {
      throw Error(Errc::BudgetExceeded, "multi-affine table with n = " + std::to_string(n) +
                                            " exceeds the limit of " +
                                            std::to_string(kMaxMultiAffineVars));
    }
    return n;
  }
  void check_var(int i) const {
    if (i < 0 || i >= n_) throw Error(Errc::DimensionMismatch, "variable index out of range");
  }
  void check_point(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != n_) {
      throw Error(Errc::DimensionMismatch, "point of length " + std::to_string(x.size()) +
                                               " for " + std::to_string(n_) + " variables");
    }
  }
  void same_n(const BasicMultiAffine& o) const {
    if (o.n_ != n_) throw Error(Errc::DimensionMismatch, "variable counts differ");
  }

  int n_;
  std::vector<T> c_;
};

using MultiAffine = BasicMultiAffine<double>;

/// Largest coefficient difference over max(1, largest coefficient).
inline double relative_coeff_distance(const MultiAffine& a, const MultiAffine& b) {
  if (a.num_vars() != b.num_vars()) throw Error(Errc::DimensionMismatch, "variable counts differ");
  double diff = 0.0;
  double scale = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a.coeffs()[k] - b.coeffs()[k]));
    scale = std::max({scale, std::abs(a.coeffs()[k]), std::abs(b.coeffs()[k])});
  }
  return diff / scale;
}

template <class T>
BasicMultiAffine<T> convert_multi_affine(const MultiAffine& p) {
  std::vector<T> c;
  c.reserve(p.size());
  for (double a : p.coeffs()) c.emplace_back(a);
  return BasicMultiAffine<T>(p.num_vars(), std::move(c));
}

}  // namespace srpave
