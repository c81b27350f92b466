#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "outerinv/csv_io.hpp"
#include "outerinv/report_json.hpp"

namespace py = pybind11;
using namespace outerinv;

namespace {

py::tuple svd_tuple(const Matrix& a) {
  SvdResult f = svd(a);
  return py::make_tuple(f.u, f.singular_values, f.vt);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Outer generalized inverses with prescribed range and null space: "
      "construction, classical special cases, explicit perturbation "
      "formulas, and randomized verification of their error bounds.";

  // exceptions
  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<FactorizationError>(m, "FactorizationError", base);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base);
  py::register_exception<NotComplementaryError>(m, "NotComplementaryError",
                                                base);
  py::register_exception<InfeasiblePrescriptionError>(
      m, "InfeasiblePrescriptionError", base);
  py::register_exception<NoGroupInverseError>(m, "NoGroupInverseError", base);
  py::register_exception<WeightError>(m, "WeightError", base);
  py::register_exception<NotDefinedError>(m, "NotDefinedError", base);
  py::register_exception<FormulaSingularityError>(m, "FormulaSingularityError",
                                                  base);
  py::register_exception<GenerationError>(m, "GenerationError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<NotSolvableError>(m, "NotSolvableError", base);

  // dense linear algebra
  m.def("svd", &svd_tuple, py::arg("a"),
        "Full SVD as a (U, singular_values, Vt) tuple.");
  m.def("numerical_rank",
        py::overload_cast<const Matrix&, double>(&numerical_rank),
        py::arg("a"), py::arg("tol") = -1.0);
  m.def("spectral_norm", &spectral_norm, py::arg("a"));
  m.def("range_basis", &range_basis, py::arg("a"), py::arg("tol") = -1.0);
  m.def("nullspace_basis", &nullspace_basis, py::arg("a"),
        py::arg("tol") = -1.0);
  m.def("solve_square", &solve_square, py::arg("a"), py::arg("b"));
  m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
  m.def("write_matrix_csv",
        py::overload_cast<const std::string&, const Matrix&>(
            &write_matrix_csv),
        py::arg("path"), py::arg("m"));

  // subspaces and projectors
  py::class_<Subspace>(m, "Subspace")
      .def_static("from_spanning", &Subspace::from_spanning,
                  py::arg("vectors"), py::arg("tol") = -1.0)
      .def_static("from_orthonormal", &Subspace::from_orthonormal,
                  py::arg("basis"))
      .def_static("zero", &Subspace::zero, py::arg("ambient_dim"))
      .def_static("full", &Subspace::full, py::arg("ambient_dim"))
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("basis", &Subspace::basis)
      .def("__repr__", [](const Subspace& s) {
        return "<Subspace dim=" + std::to_string(s.dim()) + " of R^" +
               std::to_string(s.ambient_dim()) + ">";
      });

  m.def("dist_point", &dist_point, py::arg("x"), py::arg("n"));
  m.def("delta", &delta, py::arg("m"), py::arg("n"),
        "One-sided deviation sup_{unit x in M} dist(x, N).");
  m.def("gap", &gap, py::arg("m"), py::arg("n"),
        "Symmetric gap max(delta(M,N), delta(N,M)).");
  m.def("orth_projector", &orth_projector, py::arg("m"));
  m.def("orth_complement", &orth_complement, py::arg("m"));
  m.def("oblique_projector", &oblique_projector, py::arg("range_part"),
        py::arg("null_part"));
  m.def("is_complementary", &is_complementary, py::arg("m"), py::arg("n"),
        py::arg("tol") = -1.0);

  // outer inverses
  py::class_<ExistenceDiagnostics>(m, "ExistenceDiagnostics")
      .def_readonly("nullspace_disjoint",
                    &ExistenceDiagnostics::nullspace_disjoint)
      .def_readonly("complement_ok", &ExistenceDiagnostics::complement_ok)
      .def_readonly("sigma_min_on_t", &ExistenceDiagnostics::sigma_min_on_t)
      .def_readonly("complement_margin",
                    &ExistenceDiagnostics::complement_margin)
      .def_readonly("dim_t", &ExistenceDiagnostics::dim_t)
      .def_readonly("dim_s", &ExistenceDiagnostics::dim_s)
      .def_readonly("dim_at", &ExistenceDiagnostics::dim_at)
      .def_readonly("ambient_y", &ExistenceDiagnostics::ambient_y)
      .def("exists", &ExistenceDiagnostics::exists)
      .def("__repr__", &ExistenceDiagnostics::describe);

  py::class_<OuterInverseSolution>(m, "OuterInverseSolution")
      .def_readonly("g2", &OuterInverseSolution::g2)
      .def_readonly("kappa", &OuterInverseSolution::kappa)
      .def_readonly("residual_defining_eq",
                    &OuterInverseSolution::residual_defining_eq)
      .def_readonly("range_gap", &OuterInverseSolution::range_gap)
      .def_readonly("kernel_gap", &OuterInverseSolution::kernel_gap);

  m.def("exists_outer_inverse", &exists_outer_inverse, py::arg("a"),
        py::arg("t"), py::arg("s"), py::arg("tol") = -1.0);
  m.def("prescribed_operator", &prescribed_operator, py::arg("t"),
        py::arg("s"), py::arg("mixing") = Matrix());
  m.def("group_inverse", &group_inverse, py::arg("m"), py::arg("tol") = -1.0);
  m.def("outer_inverse",
        py::overload_cast<const Matrix&, const Subspace&, const Subspace&>(
            &outer_inverse),
        py::arg("a"), py::arg("t"), py::arg("s"));
  m.def("matrix_index", &matrix_index, py::arg("a"), py::arg("tol") = -1.0);
  m.def("moore_penrose", &moore_penrose, py::arg("a"));
  m.def("weighted_moore_penrose", &weighted_moore_penrose, py::arg("a"),
        py::arg("m_weight"), py::arg("n_weight"));
  m.def("drazin", &drazin, py::arg("a"));
  m.def("bott_duffin", &bott_duffin, py::arg("a"), py::arg("l"));
  m.def("condition_number", &condition_number, py::arg("a"),
        py::arg("solution"));

  // perturbation formulas and bounds
  py::enum_<HypothesisName>(m, "HypothesisName")
      .value("lemma23", HypothesisName::lemma23)
      .value("lemma31", HypothesisName::lemma31)
      .value("lemma32", HypothesisName::lemma32)
      .value("thm33", HypothesisName::thm33)
      .value("lemma34", HypothesisName::lemma34)
      .value("thm35", HypothesisName::thm35);

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("delta_t", &Thresholds::delta_t)
      .def_readonly("delta_s", &Thresholds::delta_s)
      .def_readonly("e_product", &Thresholds::e_product);

  py::class_<HypothesisCheck>(m, "HypothesisCheck")
      .def_readonly("name", &HypothesisCheck::name)
      .def_readonly("kappa", &HypothesisCheck::kappa)
      .def_readonly("delta_t", &HypothesisCheck::delta_t)
      .def_readonly("delta_s", &HypothesisCheck::delta_s)
      .def_readonly("e_product", &HypothesisCheck::e_product)
      .def_readonly("thresholds", &HypothesisCheck::thresholds)
      .def_readonly("satisfied", &HypothesisCheck::satisfied);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("hypothesis", &BoundReport::hypothesis)
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs", &BoundReport::rhs)
      .def_readonly("ratio", &BoundReport::ratio)
      .def_readonly("satisfied", &BoundReport::satisfied)
      .def("to_json",
           [](const BoundReport& r) { return bound_report_to_json(r).dump(); })
      .def("__repr__", [](const BoundReport& r) {
        return "<BoundReport " + r.name + " lhs=" + std::to_string(r.lhs) +
               " rhs=" + std::to_string(r.rhs) +
               (r.satisfied ? " ok>" : " VIOLATED>");
      });

  py::class_<FormulaResult>(m, "FormulaResult")
      .def_readonly("value", &FormulaResult::value)
      .def_readonly("oracle", &FormulaResult::oracle)
      .def_readonly("rel_error", &FormulaResult::rel_error);

  py::class_<ImageGapResult>(m, "ImageGapResult")
      .def_readonly("report", &ImageGapResult::report)
      .def_readonly("nullspace_disjoint", &ImageGapResult::nullspace_disjoint);

  py::class_<PerturbationScenario>(m, "PerturbationScenario")
      .def(py::init<Matrix, Matrix, Subspace, Subspace, Subspace, Subspace>(),
           py::arg("a"), py::arg("e"), py::arg("t"), py::arg("t_prime"),
           py::arg("s"), py::arg("s_prime"))
      .def_readonly("a", &PerturbationScenario::a)
      .def_readonly("e", &PerturbationScenario::e);

  m.def("check_hypothesis", &check_hypothesis, py::arg("name"),
        py::arg("kappa"), py::arg("delta_t"), py::arg("delta_s"),
        py::arg("e_product"));
  m.def("image_gap_lemma23", &image_gap_lemma23, py::arg("a"), py::arg("t"),
        py::arg("s"), py::arg("t_prime"));
  m.def("perturb_t", &perturb_t, py::arg("a"), py::arg("t"), py::arg("s"),
        py::arg("t_prime"), py::arg("mixing_g") = Matrix(),
        py::arg("mixing_h") = Matrix());
  m.def("perturb_t_bounds", &perturb_t_bounds, py::arg("a"), py::arg("t"),
        py::arg("s"), py::arg("t_prime"));
  m.def("perturb_s", &perturb_s, py::arg("a"), py::arg("t"), py::arg("s"),
        py::arg("s_prime"), py::arg("mixing_g") = Matrix(),
        py::arg("mixing_h") = Matrix());
  m.def("perturb_s_bounds", &perturb_s_bounds, py::arg("a"), py::arg("t"),
        py::arg("s"), py::arg("s_prime"));
  m.def("perturb_ts", &perturb_ts, py::arg("a"), py::arg("t"), py::arg("s"),
        py::arg("t_prime"), py::arg("s_prime"),
        py::arg("mixing_g") = Matrix(), py::arg("mixing_gt") = Matrix(),
        py::arg("mixing_ht") = Matrix());
  m.def("perturb_ts_bounds", &perturb_ts_bounds, py::arg("a"), py::arg("t"),
        py::arg("s"), py::arg("t_prime"), py::arg("s_prime"));
  m.def("perturb_a", &perturb_a, py::arg("a"), py::arg("e"), py::arg("t"),
        py::arg("s"));
  m.def("perturb_a_bounds", &perturb_a_bounds, py::arg("a"), py::arg("e"),
        py::arg("t"), py::arg("s"));
  m.def("perturb_full", &perturb_full, py::arg("scenario"),
        py::arg("mixing_g") = Matrix(), py::arg("mixing_gt") = Matrix(),
        py::arg("mixing_ht") = Matrix());
  m.def("perturb_full_bounds", &perturb_full_bounds, py::arg("scenario"));

  // randomized harness
  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("substream", &Rng::substream, py::arg("seed"),
                  py::arg("stream_id"))
      .def("uniform", &Rng::uniform)
      .def("gaussian", &Rng::gaussian)
      .def("gaussian_matrix", &Rng::gaussian_matrix, py::arg("rows"),
           py::arg("cols"));

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("formula_rel", &Tolerances::formula_rel)
      .def_readwrite("bound_slack_rel", &Tolerances::bound_slack_rel)
      .def_readwrite("bound_slack_abs", &Tolerances::bound_slack_abs);

  py::class_<TrialConfig>(m, "TrialConfig")
      .def(py::init<>())
      .def_readwrite("seed", &TrialConfig::seed)
      .def_readwrite("trials", &TrialConfig::trials)
      .def_readwrite("n_x", &TrialConfig::n_x)
      .def_readwrite("n_y", &TrialConfig::n_y)
      .def_readwrite("t", &TrialConfig::t)
      .def_readwrite("gap_budget_t", &TrialConfig::gap_budget_t)
      .def_readwrite("gap_budget_s", &TrialConfig::gap_budget_s)
      .def_readwrite("e_budget", &TrialConfig::e_budget)
      .def_readwrite("independent_s", &TrialConfig::independent_s)
      .def_readwrite("tolerances", &TrialConfig::tolerances);

  py::class_<TrialRecord>(m, "TrialRecord")
      .def_readonly("trial_id", &TrialRecord::trial_id)
      .def_readonly("kappa", &TrialRecord::kappa)
      .def_readonly("delta_t", &TrialRecord::delta_t)
      .def_readonly("delta_s", &TrialRecord::delta_s)
      .def_readonly("e_product", &TrialRecord::e_product)
      .def_readonly("nullspace_disjoint_tprime",
                    &TrialRecord::nullspace_disjoint_tprime)
      .def_readonly("formula_rel_errors", &TrialRecord::formula_rel_errors)
      .def_readonly("bounds", &TrialRecord::bounds)
      .def_readonly("pass_", &TrialRecord::pass)
      .def_readonly("error", &TrialRecord::error);

  py::class_<SuiteAggregates>(m, "SuiteAggregates")
      .def_readonly("max_rel_error", &SuiteAggregates::max_rel_error)
      .def_readonly("max_bound_ratio", &SuiteAggregates::max_bound_ratio)
      .def_readonly("hypothesis_satisfied",
                    &SuiteAggregates::hypothesis_satisfied)
      .def_readonly("hypothesis_total", &SuiteAggregates::hypothesis_total)
      .def_readonly("kappa_min", &SuiteAggregates::kappa_min)
      .def_readonly("kappa_max", &SuiteAggregates::kappa_max)
      .def_readonly("kappa_mean", &SuiteAggregates::kappa_mean)
      .def_readonly("failures", &SuiteAggregates::failures);

  py::class_<GeneratedProblem>(m, "GeneratedProblem")
      .def_readonly("a", &GeneratedProblem::a)
      .def_readonly("t", &GeneratedProblem::t)
      .def_readonly("s", &GeneratedProblem::s);

  py::class_<SuiteReport>(m, "SuiteReport")
      .def_readonly("config", &SuiteReport::config)
      .def_readonly("records", &SuiteReport::records)
      .def_readonly("aggregates", &SuiteReport::aggregates)
      .def(
          "to_json",
          [](const SuiteReport& r, bool include_timestamp, int indent) {
            return suite_report_to_json(r, include_timestamp).dump(indent);
          },
          py::arg("include_timestamp") = true, py::arg("indent") = 2)
      .def("to_csv",
           [](const SuiteReport& r) { return suite_report_to_csv(r); });

  m.def("gen_problem", &gen_problem, py::arg("rng"), py::arg("n_x"),
        py::arg("n_y"), py::arg("t"), py::arg("independent_s") = false);
  m.def("gen_subspace_perturbation", &gen_subspace_perturbation,
        py::arg("rng"), py::arg("v"), py::arg("target_gap"));
  m.def("gen_operator_perturbation", &gen_operator_perturbation,
        py::arg("rng"), py::arg("a"), py::arg("g2"),
        py::arg("target_product"));
  m.def("run_suite", &run_suite, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.attr("__version__") = "0.1.0";
}
