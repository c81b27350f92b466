#pragma once

#include <Eigen/Dense>

#include "outerinv/errors.hpp"

namespace outerinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Reciprocal-condition threshold below which a square system is
/// treated as singular.
inline constexpr double kSingularRcond = 1e-14;

/// Full singular value decomposition A = U * diag(s) * Vt.
struct SvdResult {
  Matrix u;                // rows x rows, orthonormal columns
  Vector singular_values;  // min(rows, cols), non-increasing
  Matrix vt;               // cols x cols, orthonormal rows
};

/// Full SVD; empty dimensions yield identity factors and no singular values.
SvdResult svd(const Matrix& a);

/// Default rank tolerance: max(rows, cols) * sigma_1 * machine epsilon.
double default_rank_tol(Index rows, Index cols, double sigma_max);

/// Number of singular values strictly above tol. A negative tol selects
/// the default tolerance.
Index numerical_rank(const Matrix& a, double tol = -1.0);
Index rank_from_singular_values(const Vector& singular_values, Index rows,
                                Index cols, double tol = -1.0);

/// Largest singular value; 0 for an empty or zero matrix.
double spectral_norm(const Matrix& a);

/// Orthonormal basis of the column space of A (rows x rank).
Matrix range_basis(const Matrix& a, double tol = -1.0);

/// Orthonormal basis of the kernel of A (cols x (cols - rank)).
Matrix nullspace_basis(const Matrix& a, double tol = -1.0);

/// X with A X = B for square A. Throws SingularMatrixError when the
/// reciprocal-condition estimate falls below kSingularRcond.
Matrix solve_square(const Matrix& a, const Matrix& b);

/// Y M^{-1} computed as a solve against M^T.
Matrix solve_square_right(const Matrix& y, const Matrix& m);

}  // namespace outerinv
