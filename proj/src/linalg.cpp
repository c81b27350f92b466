#include "outerinv/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>

namespace outerinv {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

SvdResult svd(const Matrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m == 0 || n == 0) {
    return {Matrix::Identity(m, m), Vector(0), Matrix::Identity(n, n)};
  }
  Eigen::JacobiSVD<Matrix> f(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (f.info() != Eigen::Success) {
    throw FactorizationError("svd: decomposition did not converge");
  }
  return {f.matrixU(), f.singularValues(), f.matrixV().transpose()};
}

double default_rank_tol(Index rows, Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * kEps;
}

Index rank_from_singular_values(const Vector& singular_values, Index rows,
                                Index cols, double tol) {
  if (singular_values.size() == 0) return 0;
  if (tol < 0.0) tol = default_rank_tol(rows, cols, singular_values(0));
  Index r = 0;
  while (r < singular_values.size() && singular_values(r) > tol) ++r;
  return r;
}

Index numerical_rank(const Matrix& a, double tol) {
  const SvdResult f = svd(a);
  return rank_from_singular_values(f.singular_values, a.rows(), a.cols(), tol);
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return svd(a).singular_values(0);
}

namespace {

// Fix the sign ambiguity of SVD-derived basis columns: the entry of
// largest magnitude in each column is made positive.
Matrix canonical_signs(Matrix basis) {
  for (Index j = 0; j < basis.cols(); ++j) {
    Index argmax = 0;
    basis.col(j).cwiseAbs().maxCoeff(&argmax);
    if (basis(argmax, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

}  // namespace

Matrix range_basis(const Matrix& a, double tol) {
  const SvdResult f = svd(a);
  const Index r = rank_from_singular_values(f.singular_values, a.rows(),
                                            a.cols(), tol);
  return canonical_signs(f.u.leftCols(r));
}

Matrix nullspace_basis(const Matrix& a, double tol) {
  const SvdResult f = svd(a);
  const Index r = rank_from_singular_values(f.singular_values, a.rows(),
                                            a.cols(), tol);
  return canonical_signs(f.vt.transpose().rightCols(a.cols() - r));
}

Matrix solve_square(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) {
    throw DimensionError("solve_square: matrix is not square");
  }
  if (a.rows() != b.rows()) {
    throw DimensionError("solve_square: right-hand side has wrong row count");
  }
  if (a.rows() == 0) return Matrix(0, b.cols());
  Eigen::PartialPivLU<Matrix> lu(a);
  if (!(lu.rcond() >= kSingularRcond)) {
    throw SingularMatrixError("solve_square: matrix is singular to tolerance");
  }
  return lu.solve(b);
}

Matrix solve_square_right(const Matrix& y, const Matrix& m) {
  return solve_square(m.transpose(), y.transpose()).transpose();
}

}  // namespace outerinv
