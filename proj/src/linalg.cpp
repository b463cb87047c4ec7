#include "srpave/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "srpave/errors.hpp"

namespace srpave::linalg {

bool is_symmetric(const Matrix& k, double tol) {
  if (k.rows() != k.cols()) return false;
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  return (k - k.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix principal_submatrix(const Matrix& k, Mask s) {
  const auto idx = to_indices(s);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Matrix out(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) out(a, b) = k(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  return out;
}

namespace {

// Gaussian elimination with partial pivoting on a small dense buffer.
double small_det(std::array<double, 256>& a, int m) {
  double det = 1.0;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    double best = std::abs(a[static_cast<std::size_t>(col * m + col)]);
    for (int r = col + 1; r < m; ++r) {
      const double v = std::abs(a[static_cast<std::size_t>(r * m + col)]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < m; ++c) std::swap(a[static_cast<std::size_t>(piv * m + c)], a[static_cast<std::size_t>(col * m + c)]);
      det = -det;
    }
    const double d = a[static_cast<std::size_t>(col * m + col)];
    det *= d;
    for (int r = col + 1; r < m; ++r) {
      const double f = a[static_cast<std::size_t>(r * m + col)] / d;
      if (f == 0.0) continue;
      for (int c = col + 1; c < m; ++c) a[static_cast<std::size_t>(r * m + c)] -= f * a[static_cast<std::size_t>(col * m + c)];
    }
  }
  return det;
}

}  // namespace

std::vector<double> principal_minors(const Matrix& k) {
  const int n = static_cast<int>(k.rows());
  if (k.rows() != k.cols()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  if (n > 16) throw Error(Errc::BudgetExceeded, "principal minors limited to n <= 16");
  std::vector<double> out(std::size_t{1} << n, 1.0);
  std::array<double, 256> buf{};
  std::array<int, 16> idx{};
  for (Mask s = 1; s < out.size(); ++s) {
    int m = 0;
    for (Mask t = s; t != 0; t &= t - 1) idx[static_cast<std::size_t>(m++)] = std::countr_zero(t);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) buf[static_cast<std::size_t>(a * m + b)] = k(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
    out[s] = small_det(buf, m);
  }
  return out;
}

Vector symmetric_eigenvalues(const Matrix& k) {
  if (k.rows() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double symmetric_op_norm(const Matrix& k) {
  if (k.rows() == 0) return 0.0;
  const Vector ev = symmetric_eigenvalues(k);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

bool is_psd_contraction(const Matrix& k, double tol) {
  if (!is_symmetric(k)) return false;
  if (k.rows() == 0) return true;
  const Vector ev = symmetric_eigenvalues(k);
  return ev(0) >= -tol && ev(ev.size() - 1) <= 1.0 + tol;
}

}  // namespace srpave::linalg
