#include "outerinv/subspace.hpp"

#include <algorithm>

namespace outerinv {

Subspace::Subspace(Matrix basis, Index ambient_dim)
    : basis_(std::move(basis)), ambient_dim_(ambient_dim) {}

Subspace Subspace::from_spanning(const Matrix& vectors, double tol) {
  if (vectors.rows() < 1) {
    throw DimensionError("Subspace: ambient dimension must be positive");
  }
  if (vectors.cols() == 0) return zero(vectors.rows());
  return Subspace(range_basis(vectors, tol), vectors.rows());
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (basis.rows() < 1) {
    throw DimensionError("Subspace: ambient dimension must be positive");
  }
  const Index d = basis.cols();
  const double defect =
      (basis.transpose() * basis - Matrix::Identity(d, d)).norm();
  if (!(defect < 1e-12)) {
    throw ParameterError("Subspace: basis is not orthonormal (defect " +
                         std::to_string(defect) + ")");
  }
  const Index n = basis.rows();
  return Subspace(std::move(basis), n);
}

Subspace Subspace::zero(Index ambient_dim) {
  if (ambient_dim < 1) {
    throw DimensionError("Subspace: ambient dimension must be positive");
  }
  return Subspace(Matrix(ambient_dim, 0), ambient_dim);
}

Subspace Subspace::full(Index ambient_dim) {
  if (ambient_dim < 1) {
    throw DimensionError("Subspace: ambient dimension must be positive");
  }
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim), ambient_dim);
}

namespace {

void require_same_ambient(const Subspace& m, const Subspace& n,
                          const char* where) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw DimensionError(std::string(where) + ": ambient dimensions differ");
  }
}

}  // namespace

double dist_point(const Vector& x, const Subspace& n) {
  if (x.size() != n.ambient_dim()) {
    throw DimensionError("dist_point: vector not in the ambient space");
  }
  const Vector residual = x - n.basis() * (n.basis().transpose() * x);
  return residual.norm();
}

double delta(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n, "delta");
  if (m.is_trivial()) return 0.0;
  if (m.dim() == n.dim() &&
      (m.basis().array() == n.basis().array()).all()) {
    return 0.0;
  }
  const Matrix residual =
      m.basis() - n.basis() * (n.basis().transpose() * m.basis());
  return std::clamp(spectral_norm(residual), 0.0, 1.0);
}

double gap(const Subspace& m, const Subspace& n) {
  return std::max(delta(m, n), delta(n, m));
}

Matrix orth_projector(const Subspace& m) {
  return m.basis() * m.basis().transpose();
}

Subspace orth_complement(const Subspace& m) {
  return Subspace::from_orthonormal(
      nullspace_basis(m.basis().transpose()));
}

Matrix oblique_projector(const Subspace& range_part,
                         const Subspace& null_part) {
  require_same_ambient(range_part, null_part, "oblique_projector");
  const Index n = range_part.ambient_dim();
  if (range_part.dim() + null_part.dim() != n) {
    throw NotComplementaryError(
        "oblique_projector: dimensions do not add up to the ambient space");
  }
  if (range_part.is_trivial()) return Matrix::Zero(n, n);
  const Matrix z = orth_complement(null_part).basis();  // n x dim(range_part)
  Matrix coeffs;
  try {
    coeffs = solve_square(z.transpose() * range_part.basis(), z.transpose());
  } catch (const SingularMatrixError&) {
    throw NotComplementaryError(
        "oblique_projector: range and null space intersect nontrivially");
  }
  return range_part.basis() * coeffs;
}

double complement_margin(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n, "complement_margin");
  if (m.dim() + n.dim() == 0) return 1.0;
  Matrix joint(m.ambient_dim(), m.dim() + n.dim());
  joint << m.basis(), n.basis();
  const Vector sv = svd(joint).singular_values;
  return sv(sv.size() - 1);
}

bool is_complementary(const Subspace& m, const Subspace& n, double tol) {
  require_same_ambient(m, n, "is_complementary");
  if (m.dim() + n.dim() != m.ambient_dim()) return false;
  if (tol < 0.0) {
    tol = default_rank_tol(m.ambient_dim(), m.dim() + n.dim(), 1.0);
  }
  return complement_margin(m, n) > tol;
}

}  // namespace outerinv
