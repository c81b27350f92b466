#pragma once

#include <optional>
#include <string>
#include <vector>

#include "outerinv/gen_inverse.hpp"

namespace outerinv {

/// A full perturbation instance: operator perturbation E on A, range
/// perturbation T -> T', null-space perturbation S -> S'. E may be zero and
/// T'/S' may coincide with T/S.
struct PerturbationScenario {
  Matrix a;
  Matrix e;
  Subspace t;
  Subspace t_prime;
  Subspace s;
  Subspace s_prime;
};

/// Which sufficient condition a HypothesisCheck evaluates. The names match
/// the inequality labels used in reports and in the verify output.
enum class HypothesisName { lemma23, lemma31, lemma32, thm33, lemma34, thm35 };

std::string hypothesis_name_str(HypothesisName name);

struct Thresholds {
  std::optional<double> delta_t;
  std::optional<double> delta_s;
  std::optional<double> e_product;
};

/// One evaluated hypothesis: the measured quantities, the thresholds they
/// are compared against, and the verdict. Checks are informative only;
/// no operation refuses to run on a violated hypothesis.
struct HypothesisCheck {
  HypothesisName name = HypothesisName::lemma31;
  double kappa = 0.0;
  double delta_t = 0.0;    // gap(T, T')
  double delta_s = 0.0;    // gap(S, S')
  double e_product = 0.0;  // ||A^(2)_{T,S}|| * ||E||
  Thresholds thresholds;
  bool satisfied = false;
};

HypothesisCheck check_hypothesis(HypothesisName name, double kappa,
                                 double delta_t, double delta_s,
                                 double e_product);

/// One verified inequality. satisfied uses the floating-point slack
/// lhs <= rhs * (1 + 1e-9) + 1e-12; ratio is lhs/rhs, 0 when both are 0.
struct BoundReport {
  std::string name;
  HypothesisCheck hypothesis;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool satisfied = false;
};

BoundReport make_bound_report(std::string name, HypothesisCheck hypothesis,
                              double lhs, double rhs);

/// A formula output next to the directly constructed inverse it must match.
struct FormulaResult {
  Matrix value;
  Matrix oracle;
  double rel_error = 0.0;  // ||value - oracle||_F / max(1, ||oracle||_F)
};

struct ImageGapResult {
  BoundReport report;           // lemma23.image_gap
  bool nullspace_disjoint;      // N(A) ∩ T' = {0}
};

/// gap(AT, AT') against kappa * d / (1 - (1+kappa) d) with d = gap(T, T'),
/// plus the kernel condition on T'.
ImageGapResult image_gap_lemma23(const Matrix& a, const Subspace& t,
                                 const Subspace& s, const Subspace& t_prime);

// Explicit update formulas. Each returns the formula value together with
// the independently constructed inverse of the perturbed problem. The
// mixing arguments feed prescribed_operator and default to the identity;
// every formula output is invariant under them.

/// Range perturbation T -> T' at fixed S.
FormulaResult perturb_t(const Matrix& a, const Subspace& t, const Subspace& s,
                        const Subspace& t_prime,
                        const Matrix& mixing_g = Matrix(),
                        const Matrix& mixing_h = Matrix());
std::vector<BoundReport> perturb_t_bounds(const Matrix& a, const Subspace& t,
                                          const Subspace& s,
                                          const Subspace& t_prime);

/// Null-space perturbation S -> S' at fixed T.
FormulaResult perturb_s(const Matrix& a, const Subspace& t, const Subspace& s,
                        const Subspace& s_prime,
                        const Matrix& mixing_g = Matrix(),
                        const Matrix& mixing_h = Matrix());
std::vector<BoundReport> perturb_s_bounds(const Matrix& a, const Subspace& t,
                                          const Subspace& s,
                                          const Subspace& s_prime);

/// Simultaneous range and null-space perturbation.
FormulaResult perturb_ts(const Matrix& a, const Subspace& t, const Subspace& s,
                         const Subspace& t_prime, const Subspace& s_prime,
                         const Matrix& mixing_g = Matrix(),
                         const Matrix& mixing_gt = Matrix(),
                         const Matrix& mixing_ht = Matrix());
std::vector<BoundReport> perturb_ts_bounds(const Matrix& a, const Subspace& t,
                                           const Subspace& s,
                                           const Subspace& t_prime,
                                           const Subspace& s_prime);

/// Operator perturbation A -> A + E at fixed (T, S). Both resolvent
/// factorizations are computed and must agree to 1e-10.
FormulaResult perturb_a(const Matrix& a, const Matrix& e, const Subspace& t,
                        const Subspace& s);
std::vector<BoundReport> perturb_a_bounds(const Matrix& a, const Matrix& e,
                                          const Subspace& t, const Subspace& s);

/// All three perturbations at once.
FormulaResult perturb_full(const PerturbationScenario& scenario,
                           const Matrix& mixing_g = Matrix(),
                           const Matrix& mixing_gt = Matrix(),
                           const Matrix& mixing_ht = Matrix());
std::vector<BoundReport> perturb_full_bounds(
    const PerturbationScenario& scenario);

}  // namespace outerinv
