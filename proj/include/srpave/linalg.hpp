#pragma once

#include <Eigen/Dense>

#include <vector>

#include "srpave/subset.hpp"

namespace srpave::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// max |K - K^T| <= tol * max(1, max |K|)
bool is_symmetric(const Matrix& k, double tol = 1e-12);

/// Principal submatrix on the rows/columns in `s` (in increasing order).
Matrix principal_submatrix(const Matrix& k, Mask s);

/// det(K_S) for every S, indexed by bitmask; det(K_empty) = 1.
std::vector<double> principal_minors(const Matrix& k);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& k);

/// Operator norm of a symmetric matrix (largest |eigenvalue|); 0 when empty.
double symmetric_op_norm(const Matrix& k);

/// Symmetric K with all eigenvalues in [-tol, 1 + tol].
bool is_psd_contraction(const Matrix& k, double tol = 1e-10);

}  // namespace srpave::linalg
