#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "outerinv/perturbation.hpp"

namespace outerinv {

/// Seedable generator with per-stream substreams derived from
/// (seed, stream_id), so concurrent trial evaluation cannot change results.
/// Gaussian variates come from Box-Muller over the raw 64-bit stream, which
/// keeps output identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng substream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  Matrix gaussian_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

struct Tolerances {
  double formula_rel = 1e-8;     // formula-vs-oracle ceiling
  double bound_slack_rel = 1e-9;
  double bound_slack_abs = 1e-12;
};

/// Configuration of one randomized verification suite. Budgets are
/// fractions of the hypothesis thresholds, which depend on the per-trial
/// condition number: gap_budget_t scales 1/(1+kappa)^2, gap_budget_s scales
/// 1/(3+kappa), e_budget scales 2 kappa/((1+kappa)(4+kappa)).
struct TrialConfig {
  std::uint64_t seed = 0;
  int trials = 100;
  int n_x = 8;
  int n_y = 8;
  int t = 3;
  double gap_budget_t = 0.5;
  double gap_budget_s = 0.5;
  double e_budget = 0.5;
  bool independent_s = false;  // stress mode: S drawn independently of AT
  Tolerances tolerances;
};

struct TrialRecord {
  int trial_id = 0;
  double kappa = 0.0;
  double delta_t = 0.0;
  double delta_s = 0.0;
  double e_product = 0.0;
  bool nullspace_disjoint_tprime = false;
  std::map<std::string, double> formula_rel_errors;
  std::vector<BoundReport> bounds;
  bool pass = false;
  std::string error;  // empty unless the trial aborted
};

struct SuiteAggregates {
  std::map<std::string, double> max_rel_error;    // per formula
  std::map<std::string, double> max_bound_ratio;  // per inequality, hyp ok
  std::map<std::string, int> hypothesis_satisfied;
  std::map<std::string, int> hypothesis_total;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double kappa_mean = 0.0;
  int failures = 0;
};

struct SuiteReport {
  TrialConfig config;
  std::vector<TrialRecord> records;
  SuiteAggregates aggregates;
};

struct GeneratedProblem {
  Matrix a;
  Subspace t;
  Subspace s;
};

/// A solvable random instance: Gaussian A, random t-dimensional T with A
/// injective on it, S a perturbed complement of AT (or an independent draw
/// in stress mode). Rejects and retries up to 100 times.
GeneratedProblem gen_problem(Rng& rng, int n_x, int n_y, int t,
                             bool independent_s = false);

/// V' = span((I + eps K) U_V) with a fixed random direction K and eps
/// bisected until the measured gap is within 1e-6 of target_gap.
Subspace gen_subspace_perturbation(Rng& rng, const Subspace& v,
                                   double target_gap);

/// Gaussian E rescaled so that ||G2|| * ||E|| equals target_product.
Matrix gen_operator_perturbation(Rng& rng, const Matrix& a, const Matrix& g2,
                                 double target_product);

SuiteAggregates aggregate_records(const std::vector<TrialRecord>& records);

/// Runs config.trials independent trials (optionally on a worker pool;
/// results are identical for any thread count) and aggregates them.
SuiteReport run_suite(const TrialConfig& config, int threads = 1);

}  // namespace outerinv
