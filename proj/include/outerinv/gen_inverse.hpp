#pragma once

#include "outerinv/linalg.hpp"
#include "outerinv/subspace.hpp"

namespace outerinv {

/// Why an outer inverse with prescribed range T and null space S does or
/// does not exist for a given A: the kernel condition N(A) ∩ T = {0} and
/// the splitting condition A T ∔ S = Y, measured separately.
struct ExistenceDiagnostics {
  bool nullspace_disjoint = false;  // N(A) ∩ T = {0}
  bool complement_ok = false;       // A T ∔ S = Y
  double sigma_min_on_t = 0.0;      // sigma_min(A U_T) / ||A||
  double complement_margin = 0.0;   // sigma_min([U_AT | U_S])
  Index dim_t = 0;
  Index dim_s = 0;
  Index dim_at = 0;
  Index ambient_y = 0;

  bool exists() const { return nullspace_disjoint && complement_ok; }
  std::string describe() const;
};

/// The (A, T, S) triple is infeasible; carries the measured diagnostics.
class NotSolvableError : public Error {
 public:
  explicit NotSolvableError(ExistenceDiagnostics diag)
      : Error(diag.describe()), diagnostics(std::move(diag)) {}

  ExistenceDiagnostics diagnostics;
};

struct OuterInverseProblem {
  Matrix a;    // n_Y x n_X
  Subspace t;  // subspace of R^{n_X}
  Subspace s;  // subspace of R^{n_Y}
};

struct OuterInverseSolution {
  Matrix g2;     // n_X x n_Y, the outer inverse with range T, null space S
  double kappa;  // ||A|| * ||G2||
  double residual_defining_eq;  // ||G2 A G2 - G2||_F / max(1, ||G2||_F)
  double range_gap;             // gap(R(G2), T)
  double kernel_gap;            // gap(N(G2), S)
};

ExistenceDiagnostics exists_outer_inverse(const Matrix& a, const Subspace& t,
                                          const Subspace& s, double tol = -1.0);

/// An operator G with R(G) = T and N(G) = S, built as U_T * mixing * Z^T
/// with Z spanning the orthogonal complement of S. An empty mixing matrix
/// means the identity; a singular mixing throws SingularMatrixError.
Matrix prescribed_operator(const Subspace& t, const Subspace& s,
                           const Matrix& mixing = Matrix());

/// Group inverse via the full-rank factorization M = C B from a rank-r SVD,
/// M^g = C (B C)^{-2} B. Throws NoGroupInverseError when B C is singular
/// to reciprocal condition 1e-12 (index > 1).
Matrix group_inverse(const Matrix& m, double tol = -1.0);

/// Group inverse of the product L * R. The rank decision uses a tolerance
/// scaled to ||L|| * ||R||: trailing singular values of a formed product sit
/// at the factors' noise floor, not the product's own leading value.
Matrix group_inverse_of_product(const Matrix& l, const Matrix& r);

/// The outer inverse with prescribed range and null space, computed as
/// (G A)^g G and cross-checked against G (A G)^g.
OuterInverseSolution outer_inverse(const OuterInverseProblem& problem);
OuterInverseSolution outer_inverse(const Matrix& a, const Subspace& t,
                                   const Subspace& s);

/// Smallest k >= 0 with rank(A^k) == rank(A^{k+1}).
Index matrix_index(const Matrix& a, double tol = -1.0);

// Classical inverses, each realized as an outer inverse for its canonical
// choice of range and null space.
Matrix moore_penrose(const Matrix& a);
Matrix weighted_moore_penrose(const Matrix& a, const Matrix& m_weight,
                              const Matrix& n_weight);
Matrix drazin(const Matrix& a);
Matrix bott_duffin(const Matrix& a, const Subspace& l);

/// kappa = ||A|| * ||G2||, recomputed from scratch.
double condition_number(const Matrix& a, const OuterInverseSolution& solution);

}  // namespace outerinv
