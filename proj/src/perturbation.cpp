#include "outerinv/perturbation.hpp"

#include <cmath>
#include <limits>

namespace outerinv {

std::string hypothesis_name_str(HypothesisName name) {
  switch (name) {
    case HypothesisName::lemma23: return "lemma23";
    case HypothesisName::lemma31: return "lemma31";
    case HypothesisName::lemma32: return "lemma32";
    case HypothesisName::thm33: return "thm33";
    case HypothesisName::lemma34: return "lemma34";
    case HypothesisName::thm35: return "thm35";
  }
  return "unknown";
}

HypothesisCheck check_hypothesis(HypothesisName name, double kappa,
                                 double delta_t, double delta_s,
                                 double e_product) {
  HypothesisCheck h;
  h.name = name;
  h.kappa = kappa;
  h.delta_t = delta_t;
  h.delta_s = delta_s;
  h.e_product = e_product;
  switch (name) {
    case HypothesisName::lemma23:
      h.thresholds.delta_t = 1.0 / (1.0 + kappa);
      break;
    case HypothesisName::lemma31:
      h.thresholds.delta_t = 1.0 / ((1.0 + kappa) * (1.0 + kappa));
      break;
    case HypothesisName::lemma32:
      h.thresholds.delta_s = 1.0 / (2.0 + kappa);
      break;
    case HypothesisName::thm33:
      h.thresholds.delta_t = 1.0 / ((1.0 + kappa) * (1.0 + kappa));
      h.thresholds.delta_s = 1.0 / (3.0 + kappa);
      break;
    case HypothesisName::lemma34:
      h.thresholds.e_product = 1.0;
      break;
    case HypothesisName::thm35:
      h.thresholds.delta_t = 1.0 / ((1.0 + kappa) * (1.0 + kappa));
      h.thresholds.delta_s = 1.0 / (3.0 + kappa);
      h.thresholds.e_product =
          2.0 * kappa / ((1.0 + kappa) * (4.0 + kappa));
      break;
  }
  h.satisfied = true;
  if (h.thresholds.delta_t && !(delta_t < *h.thresholds.delta_t)) {
    h.satisfied = false;
  }
  if (h.thresholds.delta_s && !(delta_s < *h.thresholds.delta_s)) {
    h.satisfied = false;
  }
  if (h.thresholds.e_product && !(e_product < *h.thresholds.e_product)) {
    h.satisfied = false;
  }
  return h;
}

BoundReport make_bound_report(std::string name, HypothesisCheck hypothesis,
                              double lhs, double rhs) {
  BoundReport r;
  r.name = std::move(name);
  r.hypothesis = hypothesis;
  r.lhs = lhs;
  r.rhs = rhs;
  if (lhs == 0.0 && rhs == 0.0) {
    r.ratio = 0.0;
  } else if (rhs != 0.0) {
    r.ratio = lhs / rhs;
  } else {
    r.ratio = std::numeric_limits<double>::infinity();
  }
  r.satisfied = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
  return r;
}

namespace {

double rel_error(const Matrix& value, const Matrix& oracle) {
  return (value - oracle).norm() / std::max(1.0, oracle.norm());
}

Matrix solve_formula(const Matrix& lhs, const Matrix& rhs, const char* where) {
  try {
    return solve_square(lhs, rhs);
  } catch (const SingularMatrixError&) {
    throw FormulaSingularityError(std::string(where) +
                                  ": an (I + ...) factor is singular");
  }
}

Matrix solve_formula_right(const Matrix& y, const Matrix& m,
                           const char* where) {
  try {
    return solve_square_right(y, m);
  } catch (const SingularMatrixError&) {
    throw FormulaSingularityError(std::string(where) +
                                  ": an (I + ...) factor is singular");
  }
}

}  // namespace

ImageGapResult image_gap_lemma23(const Matrix& a, const Subspace& t,
                                 const Subspace& s, const Subspace& t_prime) {
  const OuterInverseSolution base = outer_inverse(a, t, s);
  const double kappa = base.kappa;
  const double d_t = gap(t, t_prime);
  const HypothesisCheck h =
      check_hypothesis(HypothesisName::lemma23, kappa, d_t, 0.0, 0.0);

  const Subspace at = Subspace::from_spanning(a * t.basis());
  const Subspace at_prime = Subspace::from_spanning(a * t_prime.basis());
  const double lhs = gap(at, at_prime);
  const double rhs = kappa * d_t / (1.0 - (1.0 + kappa) * d_t);

  ImageGapResult result{make_bound_report("lemma23.image_gap", h, lhs, rhs),
                        false};
  if (t_prime.is_trivial()) {
    result.nullspace_disjoint = true;
  } else {
    const Vector sv = svd(a * t_prime.basis()).singular_values;
    const double tol = default_rank_tol(a.rows(), a.cols(), 1.0);
    result.nullspace_disjoint =
        sv(sv.size() - 1) > tol * spectral_norm(a);
  }
  return result;
}

FormulaResult perturb_t(const Matrix& a, const Subspace& t, const Subspace& s,
                        const Subspace& t_prime, const Matrix& mixing_g,
                        const Matrix& mixing_h) {
  const Index n_x = a.cols();
  const Index n_y = a.rows();
  const Matrix a2 = outer_inverse(a, t, s).g2;

  const Matrix g = prescribed_operator(t, s, mixing_g);
  const Matrix h = prescribed_operator(t_prime, s, mixing_h);
  const Matrix f = h - g;
  const Matrix ag_g = group_inverse_of_product(a, g);

  const Matrix factor = Matrix::Identity(n_y, n_y) + ag_g * (a * f);
  const Matrix resolvent = solve_formula(factor, ag_g, "perturb_t");

  FormulaResult result;
  result.value =
      a2 + (Matrix::Identity(n_x, n_x) - a2 * a) * f * resolvent;
  result.oracle = outer_inverse(a, t_prime, s).g2;
  result.rel_error = rel_error(result.value, result.oracle);
  return result;
}

std::vector<BoundReport> perturb_t_bounds(const Matrix& a, const Subspace& t,
                                          const Subspace& s,
                                          const Subspace& t_prime) {
  const OuterInverseSolution base = outer_inverse(a, t, s);
  const double kappa = base.kappa;
  const double a2_norm = spectral_norm(base.g2);
  const double d_t = gap(t, t_prime);
  const HypothesisCheck h =
      check_hypothesis(HypothesisName::lemma31, kappa, d_t, 0.0, 0.0);

  const Matrix perturbed = outer_inverse(a, t_prime, s).g2;
  const double denom = 1.0 - (1.0 + kappa) * d_t;

  std::vector<BoundReport> reports;
  reports.push_back(make_bound_report(
      "lemma31.diff_bound", h, spectral_norm(perturbed - base.g2),
      (1.0 + kappa) * d_t / denom * a2_norm));
  reports.push_back(make_bound_report("lemma31.norm_bound", h,
                                      spectral_norm(perturbed),
                                      a2_norm / denom));
  return reports;
}

FormulaResult perturb_s(const Matrix& a, const Subspace& t, const Subspace& s,
                        const Subspace& s_prime, const Matrix& mixing_g,
                        const Matrix& mixing_h) {
  const Index n_y = a.rows();
  const Matrix a2 = outer_inverse(a, t, s).g2;

  const Matrix g = prescribed_operator(t, s, mixing_g);
  const Matrix h = prescribed_operator(t, s_prime, mixing_h);
  const Matrix f = h - g;
  const Matrix ag_g = group_inverse_of_product(a, g);

  const Matrix identity = Matrix::Identity(n_y, n_y);
  const Matrix factor = identity + ag_g * (a * f);
  const Matrix correction =
      a2 * solve_formula(factor, ag_g * (a * f), "perturb_s") *
      (identity - a * a2);

  FormulaResult result;
  result.value = a2 + correction;

  // equivalent closed form: A2 (I + (AG)^g A F)^{-1} (AG)^g A H
  const Matrix closed =
      a2 * solve_formula(factor, ag_g * (a * h), "perturb_s");
  if (rel_error(result.value, closed) > 1e-9) {
    throw FactorizationError(
        "perturb_s: update form and closed form disagree beyond 1e-9");
  }

  result.oracle = outer_inverse(a, t, s_prime).g2;
  result.rel_error = rel_error(result.value, result.oracle);
  return result;
}

std::vector<BoundReport> perturb_s_bounds(const Matrix& a, const Subspace& t,
                                          const Subspace& s,
                                          const Subspace& s_prime) {
  const OuterInverseSolution base = outer_inverse(a, t, s);
  const double kappa = base.kappa;
  const double a2_norm = spectral_norm(base.g2);
  const double d_s = gap(s, s_prime);
  const HypothesisCheck h =
      check_hypothesis(HypothesisName::lemma32, kappa, 0.0, d_s, 0.0);

  const Matrix perturbed = outer_inverse(a, t, s_prime).g2;
  const double denom = 1.0 - kappa * d_s;

  std::vector<BoundReport> reports;
  reports.push_back(make_bound_report(
      "lemma32.diff_bound", h, spectral_norm(base.g2 - perturbed),
      (1.0 + kappa) * d_s / denom * a2_norm));
  reports.push_back(make_bound_report("lemma32.norm_bound", h,
                                      spectral_norm(perturbed),
                                      (1.0 + d_s) / denom * a2_norm));
  return reports;
}

namespace {

/// Shared scaffolding for the composite formulas: the base inverse, the
/// three prescribed operators, and the resolvent factors they induce.
struct CompositePieces {
  Matrix a2;        // base outer inverse
  Matrix term2;     // range-update correction
  Matrix term3;     // null-space-update correction
  Matrix composite; // a2 + term2 + term3
};

CompositePieces build_composite(const Matrix& a, const Subspace& t,
                                const Subspace& s, const Subspace& t_prime,
                                const Subspace& s_prime,
                                const Matrix& mixing_g,
                                const Matrix& mixing_gt,
                                const Matrix& mixing_ht, const char* where) {
  const Index n_x = a.cols();
  const Index n_y = a.rows();

  CompositePieces p;
  p.a2 = outer_inverse(a, t, s).g2;

  const Matrix g = prescribed_operator(t, s, mixing_g);
  const Matrix gt = prescribed_operator(t_prime, s, mixing_gt);
  const Matrix ht = prescribed_operator(t_prime, s_prime, mixing_ht);
  const Matrix f = gt - g;
  const Matrix ft = ht - gt;

  const Matrix ag_g = group_inverse_of_product(a, g);
  const Matrix agt_g = group_inverse_of_product(a, gt);

  const Matrix identity_x = Matrix::Identity(n_x, n_x);
  const Matrix identity_y = Matrix::Identity(n_y, n_y);

  const Matrix factor_g = identity_y + ag_g * (a * f);
  p.term2 = (identity_x - p.a2 * a) * f * solve_formula(factor_g, ag_g, where);

  const Matrix factor_gt = identity_y + agt_g * (a * ft);
  const Matrix left = solve_formula(factor_gt, agt_g * (a * ft), where);
  const Matrix right = solve_formula_right(identity_y - a * p.a2,
                                           identity_y + (a * f) * ag_g, where);
  p.term3 = (p.a2 + p.term2) * left * right;

  p.composite = p.a2 + p.term2 + p.term3;
  return p;
}

}  // namespace

FormulaResult perturb_ts(const Matrix& a, const Subspace& t, const Subspace& s,
                         const Subspace& t_prime, const Subspace& s_prime,
                         const Matrix& mixing_g, const Matrix& mixing_gt,
                         const Matrix& mixing_ht) {
  const CompositePieces p =
      build_composite(a, t, s, t_prime, s_prime, mixing_g, mixing_gt,
                      mixing_ht, "perturb_ts");
  FormulaResult result;
  result.value = p.composite;
  result.oracle = outer_inverse(a, t_prime, s_prime).g2;
  result.rel_error = rel_error(result.value, result.oracle);
  return result;
}

std::vector<BoundReport> perturb_ts_bounds(const Matrix& a, const Subspace& t,
                                           const Subspace& s,
                                           const Subspace& t_prime,
                                           const Subspace& s_prime) {
  const OuterInverseSolution base = outer_inverse(a, t, s);
  const double kappa = base.kappa;
  const double a2_norm = spectral_norm(base.g2);
  const double d_t = gap(t, t_prime);
  const double d_s = gap(s, s_prime);
  const HypothesisCheck h =
      check_hypothesis(HypothesisName::thm33, kappa, d_t, d_s, 0.0);

  const Matrix perturbed = outer_inverse(a, t_prime, s_prime).g2;
  const double denom = 1.0 - (1.0 + kappa) * d_t - kappa * d_s;

  std::vector<BoundReport> reports;
  reports.push_back(make_bound_report(
      "thm33.diff_bound", h, spectral_norm(perturbed - base.g2),
      (1.0 + kappa) * (d_t + d_s) / denom * a2_norm));
  reports.push_back(make_bound_report("thm33.norm_bound", h,
                                      spectral_norm(perturbed),
                                      (1.0 + d_s) / denom * a2_norm));
  return reports;
}

FormulaResult perturb_a(const Matrix& a, const Matrix& e, const Subspace& t,
                        const Subspace& s) {
  if (e.rows() != a.rows() || e.cols() != a.cols()) {
    throw DimensionError("perturb_a: perturbation shape differs from A");
  }
  const Index n_x = a.cols();
  const Index n_y = a.rows();
  const Matrix a2 = outer_inverse(a, t, s).g2;

  const Matrix left = solve_formula(
      Matrix::Identity(n_x, n_x) + a2 * e, a2, "perturb_a");
  const Matrix right = solve_formula_right(
      a2, Matrix::Identity(n_y, n_y) + e * a2, "perturb_a");
  if (rel_error(left, right) > 1e-10) {
    throw FactorizationError(
        "perturb_a: left and right resolvent forms disagree beyond 1e-10");
  }

  FormulaResult result;
  result.value = left;
  result.oracle = outer_inverse(a + e, t, s).g2;
  result.rel_error = rel_error(result.value, result.oracle);
  return result;
}

std::vector<BoundReport> perturb_a_bounds(const Matrix& a, const Matrix& e,
                                          const Subspace& t,
                                          const Subspace& s) {
  const OuterInverseSolution base = outer_inverse(a, t, s);
  const double a2_norm = spectral_norm(base.g2);
  const double e_product = a2_norm * spectral_norm(e);
  const HypothesisCheck h = check_hypothesis(HypothesisName::lemma34,
                                             base.kappa, 0.0, 0.0, e_product);

  const Matrix perturbed = outer_inverse(a + e, t, s).g2;
  const double denom = 1.0 - e_product;

  std::vector<BoundReport> reports;
  reports.push_back(make_bound_report("lemma34.norm_bound", h,
                                      spectral_norm(perturbed),
                                      a2_norm / denom));
  reports.push_back(make_bound_report(
      "lemma34.diff_bound", h, spectral_norm(perturbed - base.g2),
      a2_norm * e_product / denom));
  return reports;
}

FormulaResult perturb_full(const PerturbationScenario& scenario,
                           const Matrix& mixing_g, const Matrix& mixing_gt,
                           const Matrix& mixing_ht) {
  const Matrix& a = scenario.a;
  const Matrix& e = scenario.e;
  if (e.rows() != a.rows() || e.cols() != a.cols()) {
    throw DimensionError("perturb_full: perturbation shape differs from A");
  }
  const Index n_x = a.cols();

  const CompositePieces p =
      build_composite(a, scenario.t, scenario.s, scenario.t_prime,
                      scenario.s_prime, mixing_g, mixing_gt, mixing_ht,
                      "perturb_full");

  const Matrix bracket = Matrix::Identity(n_x, n_x) + p.a2 * e +
                         p.term2 * e + p.term3 * e;
  FormulaResult result;
  result.value = solve_formula(bracket, p.composite, "perturb_full");
  result.oracle =
      outer_inverse(a + e, scenario.t_prime, scenario.s_prime).g2;
  result.rel_error = rel_error(result.value, result.oracle);
  return result;
}

std::vector<BoundReport> perturb_full_bounds(
    const PerturbationScenario& scenario) {
  const OuterInverseSolution base =
      outer_inverse(scenario.a, scenario.t, scenario.s);
  const double kappa = base.kappa;
  const double a2_norm = spectral_norm(base.g2);
  const double d_t = gap(scenario.t, scenario.t_prime);
  const double d_s = gap(scenario.s, scenario.s_prime);
  const double e_product = a2_norm * spectral_norm(scenario.e);
  const HypothesisCheck h =
      check_hypothesis(HypothesisName::thm35, kappa, d_t, d_s, e_product);

  const Matrix perturbed =
      outer_inverse(scenario.a + scenario.e, scenario.t_prime,
                    scenario.s_prime).g2;
  const double denom = 1.0 - (1.0 + kappa) * d_t - kappa * d_s -
                       (1.0 + d_s) * e_product;

  std::vector<BoundReport> reports;
  reports.push_back(make_bound_report("thm35.norm_bound", h,
                                      spectral_norm(perturbed),
                                      (1.0 + d_s) * a2_norm / denom));
  const double diff_norm = spectral_norm(perturbed - base.g2);
  reports.push_back(make_bound_report(
      "thm35.rel_diff_bound", h,
      a2_norm > 0.0 ? diff_norm / a2_norm : diff_norm,
      (1.0 + kappa) * (d_t + d_s + (1.0 + d_s) * e_product) / denom));
  return reports;
}

}  // namespace outerinv
