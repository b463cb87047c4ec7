#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "srpave/errors.hpp"
#include "srpave/multi_affine.hpp"
#include "srpave/poly1d.hpp"

namespace srpave {

inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 20;

/// Dense multivariate polynomial with a per-variable degree cap. Exponent
/// vectors are stored in mixed radix with variable 0 least significant, so
/// the table has prod_i (cap_i + 1) entries.
template <class T>
class BasicMultiDegree {
 public:
  BasicMultiDegree() : BasicMultiDegree(std::vector<int>{}) {}

  explicit BasicMultiDegree(std::vector<int> caps, std::size_t budget = kDefaultDenseBudget)
      : caps_(std::move(caps)) {
    stride_.resize(caps_.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < caps_.size(); ++i) {
      if (caps_[i] < 0) throw Error(Errc::InvalidInput, "negative degree cap");
      stride_[i] = total;
      const auto radix = static_cast<std::size_t>(caps_[i]) + 1;
      if (total > budget / radix) {
        throw Error(Errc::BudgetExceeded, "dense table exceeds budget of " + std::to_string(budget));
      }
      total *= radix;
    }
    c_.assign(total, T(0));
  }

  static BasicMultiDegree uniform(int n, int cap, std::size_t budget = kDefaultDenseBudget) {
    return BasicMultiDegree(std::vector<int>(static_cast<std::size_t>(n), cap), budget);
  }

  static BasicMultiDegree from_multi_affine(const BasicMultiAffine<T>& p) {
    const int n = p.num_vars();
    BasicMultiDegree out = uniform(n, 1);
    for (Mask s = 0; s < p.size(); ++s) out.c_[s] = p.coeff(s);  // radix-2 layout coincides
    return out;
  }

  int num_vars() const { return static_cast<int>(caps_.size()); }
  const std::vector<int>& caps() const { return caps_; }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& coeffs() const { return c_; }

  std::size_t index_of(const std::vector<int>& e) const {
    if (e.size() != caps_.size()) throw Error(Errc::DimensionMismatch, "exponent vector length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] > caps_[i]) {
        throw Error(Errc::DimensionMismatch, "exponent exceeds degree cap");
      }
      idx += static_cast<std::size_t>(e[i]) * stride_[i];
    }
    return idx;
  }

  int exponent(std::size_t idx, int i) const {
    const auto ui = static_cast<std::size_t>(i);
    return static_cast<int>((idx / stride_[ui]) % (static_cast<std::size_t>(caps_[ui]) + 1));
  }

  std::vector<int> exponents(std::size_t idx) const {
    std::vector<int> e(caps_.size());
    for (std::size_t i = 0; i < caps_.size(); ++i) {
      e[i] = static_cast<int>(idx % (static_cast<std::size_t>(caps_[i]) + 1));
      idx /= static_cast<std::size_t>(caps_[i]) + 1;
    }
    return e;
  }

  T coeff(const std::vector<int>& e) const { return c_[index_of(e)]; }
  void set_coeff(const std::vector<int>& e, const T& v) { c_[index_of(e)] = v; }
  void add_coeff(const std::vector<int>& e, const T& v) { c_[index_of(e)] += v; }
  const T& coeff_at(std::size_t idx) const { return c_[idx]; }

  int total_degree_of(std::size_t idx) const {
    int d = 0;
    for (std::size_t i = 0; i < caps_.size(); ++i) d += exponent(idx, static_cast<int>(i));
    return d;
  }

  /// Largest total degree over nonzero coefficients; -1 for the zero polynomial.
  int total_degree() const {
    int d = -1;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] != T(0)) d = std::max(d, total_degree_of(k));
    }
    return d;
  }

  bool is_homogeneous(int d) const {
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] != T(0) && total_degree_of(k) != d) return false;
    }
    return true;
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& a) { return a == T(0); });
  }

  T eval(const std::vector<T>& x) const {
    if (x.size() != caps_.size()) {
      throw Error(Errc::DimensionMismatch, "point of length " + std::to_string(x.size()) +
                                               " for " + std::to_string(caps_.size()) + " variables");
    }
    // Horner from the most significant variable down over contiguous slices.
    std::vector<T> work = c_;
    std::size_t len = work.size();
    for (int i = num_vars() - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      const std::size_t radix = static_cast<std::size_t>(caps_[ui]) + 1;
      const std::size_t block = len / radix;
      for (std::size_t s = 0; s < block; ++s) {
        T acc(0);
        for (std::size_t k = radix; k-- > 0;) acc = acc * x[ui] + work[s + k * block];
        work[s] = acc;
      }
      len = block;
    }
    return work[0];
  }

  /// k-th derivative in variable i; that variable's cap drops by k.
  BasicMultiDegree partial(int i, int k = 1) const {
    check_var(i);
    const auto ui = static_cast<std::size_t>(i);
    std::vector<int> nc = caps_;
    nc[ui] = std::max(0, caps_[ui] - k);
    BasicMultiDegree out(nc);
    if (k > caps_[ui]) return out;
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
      if (c_[idx] == T(0)) continue;
      const int e = exponent(idx, i);
      if (e < k) continue;
      T f(1);
      for (int j = 0; j < k; ++j) f *= T(e - j);
      out.c_[out.remap(idx, *this, i, e - k)] += c_[idx] * f;
    }
    return out;
  }

  /// Substitutes beta for z_i; that variable's cap becomes 0.
  BasicMultiDegree restrict_var(int i, const T& beta) const {
    check_var(i);
    std::vector<int> nc = caps_;
    nc[static_cast<std::size_t>(i)] = 0;
    BasicMultiDegree out(nc);
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
      if (c_[idx] == T(0)) continue;
      const int e = exponent(idx, i);
      T f(1);
      for (int j = 0; j < e; ++j) f *= beta;
      out.c_[out.remap(idx, *this, i, 0)] += c_[idx] * f;
    }
    return out;
  }

  BasicPoly<T> diagonalize() const {
    std::vector<T> d;
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
      if (c_[idx] == T(0)) continue;
      const auto deg = static_cast<std::size_t>(total_degree_of(idx));
      if (d.size() <= deg) d.resize(deg + 1, T(0));
      d[deg] += c_[idx];
    }
    return BasicPoly<T>(std::move(d));
  }

  /// The univariate section t -> p(t e + a).
  BasicPoly<T> section(const std::vector<T>& e, const std::vector<T>& a) const {
    if (e.size() != caps_.size() || a.size() != caps_.size()) {
      throw Error(Errc::DimensionMismatch, "section direction/offset length");
    }
    std::vector<BasicPoly<T>> lin;
    lin.reserve(caps_.size());
    for (std::size_t i = 0; i < caps_.size(); ++i) lin.push_back(BasicPoly<T>({a[i], e[i]}));
    return section_rec(num_vars() - 1, 0, lin);
  }

  friend BasicMultiDegree multiply(const BasicMultiDegree& p, const BasicMultiDegree& q,
                                   std::size_t budget = kDefaultDenseBudget) {
    if (p.num_vars() != q.num_vars()) throw Error(Errc::DimensionMismatch, "variable counts differ");
    std::vector<int> nc(p.caps_.size());
    for (std::size_t i = 0; i < nc.size(); ++i) nc[i] = p.caps_[i] + q.caps_[i];
    BasicMultiDegree out(nc, budget);
    const auto pm = out.offsets_for(p);
    const auto qm = out.offsets_for(q);
    for (std::size_t a = 0; a < p.c_.size(); ++a) {
      if (p.c_[a] == T(0)) continue;
      for (std::size_t b = 0; b < q.c_.size(); ++b) {
        if (q.c_[b] == T(0)) continue;
        out.c_[pm[a] + qm[b]] += p.c_[a] * q.c_[b];
      }
    }
    return out;
  }

  friend BasicMultiDegree power(const BasicMultiDegree& p, int r,
                                std::size_t budget = kDefaultDenseBudget) {
    if (r < 0) throw Error(Errc::ParamOutOfRange, "negative power");
    BasicMultiDegree acc(std::vector<int>(p.caps_.size(), 0), budget);
    acc.c_[0] = T(1);
    for (int k = 0; k < r; ++k) acc = multiply(acc, p, budget);
    return acc;
  }

  BasicMultiDegree& operator+=(const BasicMultiDegree& o) {
    if (o.caps_ != caps_) throw Error(Errc::DimensionMismatch, "degree caps differ");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  BasicMultiDegree& operator*=(const T& s) {
    for (T& a : c_) a *= s;
    return *this;
  }
  friend BasicMultiDegree operator+(BasicMultiDegree a, const BasicMultiDegree& b) { return a += b; }
  friend BasicMultiDegree operator*(BasicMultiDegree a, const T& s) { return a *= s; }

 private:
  void check_var(int i) const {
    if (i < 0 || i >= num_vars()) throw Error(Errc::DimensionMismatch, "variable index out of range");
  }

  // Index in this table of src's monomial idx with the exponent of variable
  // i replaced by e_i (other exponents unchanged).
  std::size_t remap(std::size_t idx, const BasicMultiDegree& src, int i, int e_i) const {
    std::size_t out = 0;
    for (std::size_t j = 0; j < caps_.size(); ++j) {
      const int e = (static_cast<int>(j) == i) ? e_i : src.exponent(idx, static_cast<int>(j));
      out += static_cast<std::size_t>(e) * stride_[j];
    }
    return out;
  }

  std::vector<std::size_t> offsets_for(const BasicMultiDegree& src) const {
    std::vector<std::size_t> m(src.c_.size());
    for (std::size_t idx = 0; idx < src.c_.size(); ++idx) {
      std::size_t off = 0;
      std::size_t rest = idx;
      for (std::size_t j = 0; j < caps_.size(); ++j) {
        const std::size_t radix = static_cast<std::size_t>(src.caps_[j]) + 1;
        off += (rest % radix) * stride_[j];
        rest /= radix;
      }
      m[idx] = off;
    }
    return m;
  }

  BasicPoly<T> section_rec(int var, std::size_t base, const std::vector<BasicPoly<T>>& lin) const {
    if (var < 0) return BasicPoly<T>::constant(c_[base]);
    const auto uv = static_cast<std::size_t>(var);
    BasicPoly<T> acc;
    for (int k = caps_[uv]; k >= 0; --k) {
      acc = acc * lin[uv] + section_rec(var - 1, base + static_cast<std::size_t>(k) * stride_[uv], lin);
    }
    return acc;
  }

  std::vector<int> caps_;
  std::vector<std::size_t> stride_;
  std::vector<T> c_;
};

using MultiDegree = BasicMultiDegree<double>;

}  // namespace srpave
