#pragma once

#include "outerinv/linalg.hpp"

namespace outerinv {

/// Gap tolerance that means "same subspace" throughout the library.
inline constexpr double kSubspaceGapTol = 1e-8;

/// A linear subspace of R^n stored as an orthonormal basis. The trivial
/// subspace has a basis with zero columns.
class Subspace {
 public:
  /// Orthonormalized span of the given columns; dependent columns are
  /// dropped at tol (negative tol selects the default rank tolerance).
  static Subspace from_spanning(const Matrix& vectors, double tol = -1.0);

  /// Wraps an already-orthonormal basis. Throws ParameterError if the
  /// orthonormality defect ||Q^T Q - I||_F exceeds 1e-12.
  static Subspace from_orthonormal(Matrix basis);

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  bool is_trivial() const { return basis_.cols() == 0; }
  bool is_full() const { return basis_.cols() == ambient_dim_; }

 private:
  Subspace(Matrix basis, Index ambient_dim);

  Matrix basis_;  // ambient_dim x dim, orthonormal columns
  Index ambient_dim_;
};

/// Euclidean distance from x to N, i.e. ||(I - P_N) x||.
double dist_point(const Vector& x, const Subspace& n);

/// One-sided deviation: sup over unit x in M of dist(x, N), computed in
/// closed form as sigma_max((I - P_N) U_M); 0 when M is trivial.
double delta(const Subspace& m, const Subspace& n);

/// Symmetric gap: max(delta(M, N), delta(N, M)).
double gap(const Subspace& m, const Subspace& n);

/// Orthogonal projector U_M U_M^T onto M.
Matrix orth_projector(const Subspace& m);

/// Orthogonal complement of M in its ambient space.
Subspace orth_complement(const Subspace& m);

/// Idempotent with range range_part and kernel null_part. Throws
/// NotComplementaryError when the two do not decompose the ambient space.
Matrix oblique_projector(const Subspace& range_part, const Subspace& null_part);

/// True iff dim M + dim N equals the ambient dimension and the joint basis
/// [U_M | U_N] has smallest singular value above tol (negative tol selects
/// the default rank tolerance).
bool is_complementary(const Subspace& m, const Subspace& n, double tol = -1.0);

/// Smallest singular value of [U_M | U_N]; 1 when both are trivial.
double complement_margin(const Subspace& m, const Subspace& n);

}  // namespace outerinv
