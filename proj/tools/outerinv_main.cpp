// Command-line front end: CSV matrices in, JSON (or CSV) reports out.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage, I/O, or infeasible-input error.

#include <CLI11.hpp>
#include <functional>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "outerinv/csv_io.hpp"
#include "outerinv/report_json.hpp"

namespace {

using nlohmann::json;
using namespace outerinv;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json diagnostics_to_json(const ExistenceDiagnostics& d) {
  return json{{"nullspace_disjoint", d.nullspace_disjoint},
              {"complement_ok", d.complement_ok},
              {"sigma_min_on_t",
               std::isfinite(d.sigma_min_on_t) ? json(d.sigma_min_on_t)
                                               : json(nullptr)},
              {"complement_margin", d.complement_margin},
              {"dim_t", d.dim_t},
              {"dim_s", d.dim_s},
              {"dim_at", d.dim_at},
              {"ambient_y", d.ambient_y}};
}

void emit_error(const std::string& type, const std::string& message,
                json extra = json()) {
  json err{{"error", {{"type", type}, {"message", message}}}};
  if (!extra.is_null()) err["error"]["diagnostics"] = extra;
  std::cerr << err.dump() << "\n";
}

Subspace load_subspace(const std::string& path, double tol) {
  return Subspace::from_spanning(read_matrix_csv(path), tol);
}

struct MatrixOutput {
  std::string out_path;
  std::string format = "json";
};

void add_output_flags(CLI::App* cmd, MatrixOutput* out) {
  cmd->add_option("--out", out->out_path, "Write the result matrix as CSV");
  cmd->add_option("--format", out->format, "Output format for stdout")
      ->check(CLI::IsMember({"json", "csv"}));
}

int emit_matrix_result(const MatrixOutput& out, json summary,
                       const Matrix& value) {
  if (!out.out_path.empty()) write_matrix_csv(out.out_path, value);
  if (out.format == "csv") {
    write_matrix_csv(std::cout, value);
  } else {
    summary["entries"] = matrix_to_json(value);
    std::cout << summary.dump() << "\n";
  }
  return kExitOk;
}

json bounds_to_json(const std::vector<BoundReport>& bounds) {
  json arr = json::array();
  for (const auto& b : bounds) arr.push_back(bound_report_to_json(b));
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "outer generalized inverses with prescribed range and null space"};
  app.require_subcommand(1);

  double tol = -1.0;
  app.add_option("--tol", tol,
                 "Rank/existence tolerance (negative selects defaults)");

  // ---- gap ----------------------------------------------------------
  auto* gap_cmd =
      app.add_subcommand("gap", "Gap between the spans of two CSV files");
  std::string gap_m, gap_n;
  gap_cmd->add_option("--m", gap_m, "Spanning vectors of M (columns)")
      ->required();
  gap_cmd->add_option("--n", gap_n, "Spanning vectors of N (columns)")
      ->required();

  // ---- outer --------------------------------------------------------
  auto* outer_cmd = app.add_subcommand(
      "outer", "Outer inverse with prescribed range and null space");
  std::string outer_a, outer_t, outer_s;
  MatrixOutput outer_out;
  outer_cmd->add_option("--a", outer_a, "Operator A")->required();
  outer_cmd->add_option("--t", outer_t, "Spanning vectors of T")->required();
  outer_cmd->add_option("--s", outer_s, "Spanning vectors of S")->required();
  add_output_flags(outer_cmd, &outer_out);

  // ---- group --------------------------------------------------------
  auto* group_cmd = app.add_subcommand("group", "Group inverse");
  std::string group_a;
  MatrixOutput group_out;
  group_cmd->add_option("--a", group_a, "Square matrix")->required();
  add_output_flags(group_cmd, &group_out);

  // ---- classic ------------------------------------------------------
  auto* classic_cmd =
      app.add_subcommand("classic", "Classical generalized inverses");
  classic_cmd->require_subcommand(1);
  std::string classic_a, classic_wm, classic_wn, classic_l;
  MatrixOutput classic_out;
  auto* mp_cmd = classic_cmd->add_subcommand("mp", "Moore-Penrose inverse");
  auto* wmp_cmd =
      classic_cmd->add_subcommand("wmp", "Weighted Moore-Penrose inverse");
  auto* drazin_cmd = classic_cmd->add_subcommand("drazin", "Drazin inverse");
  auto* bd_cmd =
      classic_cmd->add_subcommand("bott-duffin", "Bott-Duffin inverse");
  for (auto* cmd : {mp_cmd, wmp_cmd, drazin_cmd, bd_cmd}) {
    cmd->add_option("--a", classic_a, "Matrix A")->required();
    add_output_flags(cmd, &classic_out);
  }
  wmp_cmd->add_option("--weight-m", classic_wm, "SPD weight on the codomain")
      ->required();
  wmp_cmd->add_option("--weight-n", classic_wn, "SPD weight on the domain")
      ->required();
  bd_cmd->add_option("--l", classic_l, "Spanning vectors of L")->required();

  // ---- perturb ------------------------------------------------------
  auto* perturb_cmd =
      app.add_subcommand("perturb", "Perturbation formulas and bounds");
  perturb_cmd->require_subcommand(1);
  std::string p_a, p_t, p_s, p_tp, p_sp, p_e;
  MatrixOutput perturb_out;
  auto* pt_cmd = perturb_cmd->add_subcommand("t", "Perturb the range T");
  auto* ps_cmd = perturb_cmd->add_subcommand("s", "Perturb the null space S");
  auto* pa_cmd = perturb_cmd->add_subcommand("a", "Perturb the operator A");
  auto* pts_cmd = perturb_cmd->add_subcommand("ts", "Perturb T and S");
  auto* pfull_cmd =
      perturb_cmd->add_subcommand("full", "Perturb A, T and S at once");
  for (auto* cmd : {pt_cmd, ps_cmd, pa_cmd, pts_cmd, pfull_cmd}) {
    cmd->add_option("--a", p_a, "Operator A")->required();
    cmd->add_option("--t", p_t, "Spanning vectors of T")->required();
    cmd->add_option("--s", p_s, "Spanning vectors of S")->required();
    add_output_flags(cmd, &perturb_out);
  }
  for (auto* cmd : {pt_cmd, pts_cmd, pfull_cmd}) {
    cmd->add_option("--tprime", p_tp, "Spanning vectors of T'")->required();
  }
  for (auto* cmd : {ps_cmd, pts_cmd, pfull_cmd}) {
    cmd->add_option("--sprime", p_sp, "Spanning vectors of S'")->required();
  }
  for (auto* cmd : {pa_cmd, pfull_cmd}) {
    cmd->add_option("--e", p_e, "Perturbation E of A")->required();
  }

  // ---- verify -------------------------------------------------------
  auto* verify_cmd = app.add_subcommand(
      "verify", "Randomized verification suite over solvable instances");
  TrialConfig config;
  int threads = 1;
  std::string verify_out, verify_format = "json";
  verify_cmd->add_option("--trials", config.trials, "Number of trials");
  verify_cmd->add_option("--seed", config.seed, "Suite seed");
  verify_cmd->add_option("--nx", config.n_x, "Domain dimension n_X");
  verify_cmd->add_option("--ny", config.n_y, "Codomain dimension n_Y");
  verify_cmd->add_option("--t", config.t, "dim T");
  verify_cmd->add_option("--budget-t", config.gap_budget_t,
                         "Fraction of the T-gap threshold");
  verify_cmd->add_option("--budget-s", config.gap_budget_s,
                         "Fraction of the S-gap threshold");
  verify_cmd->add_option("--budget-e", config.e_budget,
                         "Fraction of the E-product threshold");
  verify_cmd->add_flag("--independent-s", config.independent_s,
                       "Draw S independently of AT (stress mode)");
  verify_cmd->add_option("--threads", threads, "Worker threads");
  verify_cmd->add_option("--out", verify_out, "Report file path");
  verify_cmd->add_option("--format", verify_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));

  // allow the shared --tol flag after a subcommand name
  const std::function<void(CLI::App*)> enable_fallthrough =
      [&](CLI::App* cmd) {
        cmd->fallthrough();
        for (auto* sub : cmd->get_subcommands({})) enable_fallthrough(sub);
      };
  for (auto* sub : app.get_subcommands({})) enable_fallthrough(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gap_cmd) {
      const Subspace m = load_subspace(gap_m, tol);
      const Subspace n = load_subspace(gap_n, tol);
      const double d_mn = delta(m, n);
      const double d_nm = delta(n, m);
      std::cout << json{{"delta_mn", d_mn},
                        {"delta_nm", d_nm},
                        {"gap", std::max(d_mn, d_nm)}}
                       .dump()
                << "\n";
      return kExitOk;
    }

    if (*outer_cmd) {
      const Matrix a = read_matrix_csv(outer_a);
      const Subspace t = load_subspace(outer_t, tol);
      const Subspace s = load_subspace(outer_s, tol);
      const OuterInverseSolution sol = outer_inverse(a, t, s);
      json summary{{"exists", true},
                   {"kappa", sol.kappa},
                   {"residual_defining_eq", sol.residual_defining_eq},
                   {"range_gap", sol.range_gap},
                   {"kernel_gap", sol.kernel_gap}};
      return emit_matrix_result(outer_out, std::move(summary), sol.g2);
    }

    if (*group_cmd) {
      const Matrix m = read_matrix_csv(group_a);
      const Matrix g = group_inverse(m, tol);
      json summary{{"rank", numerical_rank(m, tol)},
                   {"residual_axioms",
                    std::max({(m * g * m - m).norm(), (g * m * g - g).norm(),
                              (m * g - g * m).norm()}) /
                        std::max(1.0, m.norm())}};
      return emit_matrix_result(group_out, std::move(summary), g);
    }

    if (*classic_cmd) {
      const Matrix a = read_matrix_csv(classic_a);
      Matrix value;
      std::string kind;
      if (*mp_cmd) {
        kind = "moore_penrose";
        value = moore_penrose(a);
      } else if (*wmp_cmd) {
        kind = "weighted_moore_penrose";
        value = weighted_moore_penrose(a, read_matrix_csv(classic_wm),
                                       read_matrix_csv(classic_wn));
      } else if (*drazin_cmd) {
        kind = "drazin";
        value = drazin(a);
      } else {
        kind = "bott_duffin";
        value = bott_duffin(a, load_subspace(classic_l, tol));
      }
      return emit_matrix_result(classic_out, json{{"inverse", kind}}, value);
    }

    if (*perturb_cmd) {
      const Matrix a = read_matrix_csv(p_a);
      const Subspace t = load_subspace(p_t, tol);
      const Subspace s = load_subspace(p_s, tol);
      FormulaResult formula;
      std::vector<BoundReport> bounds;
      std::string kind;
      if (*pt_cmd) {
        kind = "perturb_t";
        const Subspace tp = load_subspace(p_tp, tol);
        formula = perturb_t(a, t, s, tp);
        bounds = perturb_t_bounds(a, t, s, tp);
      } else if (*ps_cmd) {
        kind = "perturb_s";
        const Subspace sp = load_subspace(p_sp, tol);
        formula = perturb_s(a, t, s, sp);
        bounds = perturb_s_bounds(a, t, s, sp);
      } else if (*pa_cmd) {
        kind = "perturb_a";
        const Matrix e = read_matrix_csv(p_e);
        formula = perturb_a(a, e, t, s);
        bounds = perturb_a_bounds(a, e, t, s);
      } else if (*pts_cmd) {
        kind = "perturb_ts";
        const Subspace tp = load_subspace(p_tp, tol);
        const Subspace sp = load_subspace(p_sp, tol);
        formula = perturb_ts(a, t, s, tp, sp);
        bounds = perturb_ts_bounds(a, t, s, tp, sp);
      } else {
        kind = "perturb_full";
        const PerturbationScenario scenario{
            a, read_matrix_csv(p_e), t, load_subspace(p_tp, tol),
            s, load_subspace(p_sp, tol)};
        formula = perturb_full(scenario);
        bounds = perturb_full_bounds(scenario);
      }
      json summary{{"formula", kind},
                   {"rel_error", formula.rel_error},
                   {"bounds", bounds_to_json(bounds)}};
      return emit_matrix_result(perturb_out, std::move(summary),
                                formula.value);
    }

    if (*verify_cmd) {
      const SuiteReport report = run_suite(config, threads);
      std::string payload;
      if (verify_format == "csv") {
        payload = suite_report_to_csv(report);
      } else {
        payload = suite_report_to_json(report).dump(2);
        payload += "\n";
      }
      if (!verify_out.empty()) {
        std::ofstream out(verify_out);
        if (!out) throw IoError(verify_out + ": cannot open for writing");
        out << payload;
        if (!out) throw IoError(verify_out + ": write failed");
        std::cout << json{{"trials", config.trials},
                          {"failures", report.aggregates.failures},
                          {"report", verify_out}}
                         .dump()
                  << "\n";
      } else {
        std::cout << payload;
      }
      return report.aggregates.failures == 0 ? kExitOk
                                             : kExitVerificationFailure;
    }
  } catch (const NotSolvableError& e) {
    emit_error("not_solvable", e.what(), diagnostics_to_json(e.diagnostics));
    return kExitUsage;
  } catch (const IoError& e) {
    emit_error("io", e.what());
    return kExitUsage;
  } catch (const ParameterError& e) {
    emit_error("parameter", e.what());
    return kExitUsage;
  } catch (const DimensionError& e) {
    emit_error("dimension", e.what());
    return kExitUsage;
  } catch (const NoGroupInverseError& e) {
    emit_error("no_group_inverse", e.what());
    return kExitUsage;
  } catch (const NotDefinedError& e) {
    emit_error("not_defined", e.what());
    return kExitUsage;
  } catch (const WeightError& e) {
    emit_error("weight", e.what());
    return kExitUsage;
  } catch (const InfeasiblePrescriptionError& e) {
    emit_error("infeasible_prescription", e.what());
    return kExitUsage;
  } catch (const NotComplementaryError& e) {
    emit_error("not_complementary", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    emit_error("numerical", e.what());
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
