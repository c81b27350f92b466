#include "outerinv/gen_inverse.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <sstream>

namespace outerinv {

std::string ExistenceDiagnostics::describe() const {
  std::ostringstream os;
  os << "outer inverse existence: nullspace_disjoint="
     << (nullspace_disjoint ? "true" : "false")
     << " (sigma_min_on_t=" << sigma_min_on_t << ")"
     << ", complement_ok=" << (complement_ok ? "true" : "false")
     << " (complement_margin=" << complement_margin << ", dim_at=" << dim_at
     << ", dim_s=" << dim_s << ", ambient_y=" << ambient_y << ")";
  return os.str();
}

ExistenceDiagnostics exists_outer_inverse(const Matrix& a, const Subspace& t,
                                          const Subspace& s, double tol) {
  if (t.ambient_dim() != a.cols()) {
    throw DimensionError("exists_outer_inverse: T not in the domain of A");
  }
  if (s.ambient_dim() != a.rows()) {
    throw DimensionError("exists_outer_inverse: S not in the codomain of A");
  }
  if (tol < 0.0) tol = default_rank_tol(a.rows(), a.cols(), 1.0);

  ExistenceDiagnostics diag;
  diag.dim_t = t.dim();
  diag.dim_s = s.dim();
  diag.ambient_y = a.rows();

  const double a_norm = spectral_norm(a);
  const Matrix at = a * t.basis();  // n_Y x dim_t

  if (t.is_trivial()) {
    diag.nullspace_disjoint = true;
    diag.sigma_min_on_t = std::numeric_limits<double>::infinity();
  } else if (t.dim() > a.rows() || a_norm == 0.0) {
    diag.nullspace_disjoint = false;
    diag.sigma_min_on_t = 0.0;
  } else {
    const Vector sv = svd(at).singular_values;
    const double sigma_min = sv(sv.size() - 1);
    diag.sigma_min_on_t = sigma_min / a_norm;
    diag.nullspace_disjoint = sigma_min > tol * a_norm;
  }

  const Subspace at_space = Subspace::from_spanning(at);
  diag.dim_at = at_space.dim();
  diag.complement_margin = complement_margin(at_space, s);
  diag.complement_ok = is_complementary(at_space, s, tol);
  return diag;
}

Matrix prescribed_operator(const Subspace& t, const Subspace& s,
                           const Matrix& mixing) {
  const Index rank = t.dim();
  if (rank + s.dim() != s.ambient_dim()) {
    throw InfeasiblePrescriptionError(
        "prescribed_operator: dim T + dim S must equal the codomain "
        "dimension of the operator being inverted");
  }
  const Matrix z = orth_complement(s).basis();  // n_Y x rank
  if (mixing.size() == 0) {
    return t.basis() * z.transpose();
  }
  if (mixing.rows() != rank || mixing.cols() != rank) {
    throw DimensionError("prescribed_operator: mixing must be dim T x dim T");
  }
  if (rank > 0) {
    Eigen::PartialPivLU<Matrix> lu(mixing);
    if (!(lu.rcond() >= kSingularRcond)) {
      throw SingularMatrixError("prescribed_operator: mixing is singular");
    }
  }
  return t.basis() * mixing * z.transpose();
}

Matrix group_inverse(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("group_inverse: matrix is not square");
  }
  const Index n = m.rows();
  if (n == 0) return Matrix(0, 0);

  const SvdResult f = svd(m);
  const Index r = rank_from_singular_values(f.singular_values, n, n, tol);
  if (r == 0) return Matrix::Zero(n, n);

  // full-rank factorization M = C B
  const Matrix c =
      f.u.leftCols(r) * f.singular_values.head(r).asDiagonal();  // n x r
  const Matrix b = f.vt.topRows(r);                              // r x n
  const Matrix bc = b * c;                                       // r x r

  Eigen::PartialPivLU<Matrix> lu(bc);
  if (!(lu.rcond() >= 1e-12)) {
    throw NoGroupInverseError(
        "group_inverse: index exceeds 1, group inverse does not exist");
  }
  return c * lu.solve(lu.solve(b));  // C (BC)^{-2} B
}

Matrix group_inverse_of_product(const Matrix& l, const Matrix& r) {
  const Matrix product = l * r;
  const double scale = spectral_norm(l) * spectral_norm(r);
  return group_inverse(
      product, default_rank_tol(product.rows(), product.cols(), scale));
}

namespace {

double rel_diff(const Matrix& x, const Matrix& y) {
  return (x - y).norm() / std::max(1.0, y.norm());
}

}  // namespace

OuterInverseSolution outer_inverse(const OuterInverseProblem& problem) {
  const Matrix& a = problem.a;
  const ExistenceDiagnostics diag =
      exists_outer_inverse(a, problem.t, problem.s);
  if (!diag.exists()) throw NotSolvableError(diag);

  const Matrix g = prescribed_operator(problem.t, problem.s);
  const Matrix g2 = group_inverse_of_product(g, a) * g;
  const Matrix g2_alt = g * group_inverse_of_product(a, g);
  if (rel_diff(g2, g2_alt) > 1e-9) {
    throw FactorizationError(
        "outer_inverse: the two group-inverse factorizations disagree");
  }

  OuterInverseSolution sol;
  sol.g2 = g2;
  sol.kappa = spectral_norm(a) * spectral_norm(g2);
  sol.residual_defining_eq =
      (g2 * a * g2 - g2).norm() / std::max(1.0, g2.norm());
  sol.range_gap = gap(Subspace::from_spanning(g2), problem.t);
  sol.kernel_gap =
      gap(Subspace::from_orthonormal(nullspace_basis(g2)), problem.s);
  return sol;
}

OuterInverseSolution outer_inverse(const Matrix& a, const Subspace& t,
                                   const Subspace& s) {
  return outer_inverse(OuterInverseProblem{a, t, s});
}

Index matrix_index(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw DimensionError("matrix_index: matrix is not square");
  }
  const Index n = a.rows();
  const double a_norm = spectral_norm(a);
  Matrix power = Matrix::Identity(n, n);
  double power_scale = 1.0;
  Index rank_prev = n;  // rank(A^0)
  for (Index k = 0; k <= n; ++k) {
    power = power * a;  // A^{k+1}
    power_scale *= a_norm;
    // rank of a computed power is decided at the power's noise floor
    // ||A||^{k+1} * eps, not at its own leading singular value
    const double tol_k =
        tol >= 0.0 ? tol : default_rank_tol(n, n, power_scale);
    Index rank_next = numerical_rank(power, tol_k);
    if (rank_next > rank_prev) rank_next = rank_prev;  // ranks cannot grow
    if (rank_next == rank_prev) return k;
    rank_prev = rank_next;
  }
  return n;  // rank sequence stabilizes after at most n steps
}

Matrix moore_penrose(const Matrix& a) {
  const Subspace t = Subspace::from_spanning(a.transpose());  // R(A^T)
  const Subspace s =
      Subspace::from_orthonormal(nullspace_basis(a.transpose()));  // N(A^T)
  return outer_inverse(a, t, s).g2;
}

namespace {

Matrix require_spd(const Matrix& w, const char* which,
                   Eigen::LLT<Matrix>* llt_out) {
  if (w.rows() != w.cols()) {
    throw WeightError(std::string(which) + ": weight is not square");
  }
  if ((w - w.transpose()).norm() > 1e-10 * std::max(1.0, w.norm())) {
    throw WeightError(std::string(which) + ": weight is not symmetric");
  }
  Eigen::LLT<Matrix> llt(w);
  if (llt.info() != Eigen::Success) {
    throw WeightError(std::string(which) + ": weight is not positive definite");
  }
  if (llt_out) *llt_out = llt;
  return w;
}

}  // namespace

Matrix weighted_moore_penrose(const Matrix& a, const Matrix& m_weight,
                              const Matrix& n_weight) {
  if (m_weight.rows() != a.rows() || n_weight.rows() != a.cols()) {
    throw DimensionError("weighted_moore_penrose: weight dimensions mismatch");
  }
  require_spd(m_weight, "M weight", nullptr);
  Eigen::LLT<Matrix> n_llt;
  require_spd(n_weight, "N weight", &n_llt);

  const Matrix atm = a.transpose() * m_weight;           // n_X x n_Y
  const Subspace t = Subspace::from_spanning(n_llt.solve(atm));  // R(N^{-1}A^T M)
  const Subspace s = Subspace::from_orthonormal(nullspace_basis(atm));
  return outer_inverse(a, t, s).g2;
}

Matrix drazin(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("drazin: matrix is not square");
  }
  const Index n = a.rows();
  const Index k = matrix_index(a);
  Matrix power = Matrix::Identity(n, n);
  double power_scale = 1.0;
  for (Index i = 0; i < k; ++i) {
    power = power * a;  // A^k
    power_scale *= spectral_norm(a);
  }
  const double tol_k = default_rank_tol(n, n, power_scale);
  const Subspace t = Subspace::from_spanning(power, tol_k);
  const Subspace s = Subspace::from_orthonormal(nullspace_basis(power, tol_k));
  return outer_inverse(a, t, s).g2;
}

Matrix bott_duffin(const Matrix& a, const Subspace& l) {
  if (a.rows() != a.cols()) {
    throw DimensionError("bott_duffin: matrix is not square");
  }
  if (l.ambient_dim() != a.rows()) {
    throw DimensionError("bott_duffin: subspace not in the ambient space");
  }
  const Index n = a.rows();
  const Matrix pl = orth_projector(l);
  const Matrix op = a * pl + Matrix::Identity(n, n) - pl;
  {
    Eigen::PartialPivLU<Matrix> lu(op);
    if (!(lu.rcond() >= kSingularRcond)) {
      throw NotDefinedError(
          "bott_duffin: A P_L + P_{L^perp} is singular, the constrained "
          "inverse is not defined");
    }
  }
  return outer_inverse(a, l, orth_complement(l)).g2;
}

double condition_number(const Matrix& a, const OuterInverseSolution& solution) {
  return spectral_norm(a) * spectral_norm(solution.g2);
}

}  // namespace outerinv
