#include "outerinv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace outerinv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(splitmix64(seed) ^ splitmix64(stream_id + 1));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  cached_ = radius * std::sin(kTwoPi * u2);
  have_cached_ = true;
  return radius * std::cos(kTwoPi * u2);
}

Matrix Rng::gaussian_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = gaussian();
    }
  }
  return m;
}

GeneratedProblem gen_problem(Rng& rng, int n_x, int n_y, int t,
                             bool independent_s) {
  if (n_x < 1 || n_y < 1) {
    throw ParameterError("gen_problem: ambient dimensions must be positive");
  }
  if (t < 1 || t > std::min(n_x, n_y)) {
    throw ParameterError("gen_problem: need 1 <= t <= min(n_X, n_Y)");
  }

  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix a = rng.gaussian_matrix(n_y, n_x);
    const Subspace t_space =
        Subspace::from_spanning(rng.gaussian_matrix(n_x, t));
    if (t_space.dim() != t) continue;

    // quality gate: A must be well conditioned on T, otherwise kappa blows up
    const Matrix at = a * t_space.basis();
    const Vector sv = svd(at).singular_values;
    if (sv(sv.size() - 1) < 1e-4 * spectral_norm(a)) continue;
    const Subspace at_space = Subspace::from_spanning(at);
    if (at_space.dim() != t) continue;

    Subspace s_space = Subspace::zero(n_y);
    if (independent_s) {
      if (t < n_y) {
        s_space = Subspace::from_spanning(rng.gaussian_matrix(n_y, n_y - t));
        if (s_space.dim() != n_y - t) continue;
      }
    } else {
      const Subspace complement = orth_complement(at_space);
      if (t == n_y) {
        s_space = complement;  // trivial
      } else {
        Matrix direction = rng.gaussian_matrix(n_y, n_y - t);
        const double scale = spectral_norm(direction);
        if (scale > 0.0) direction /= scale;
        const double eps = 0.3 * rng.uniform();
        s_space =
            Subspace::from_spanning(complement.basis() + eps * direction);
        if (s_space.dim() != n_y - t) continue;
      }
    }

    const ExistenceDiagnostics diag = exists_outer_inverse(a, t_space, s_space);
    if (!diag.exists()) continue;
    if (!independent_s && diag.complement_margin < 1e-3) continue;
    return {std::move(a), t_space, s_space};
  }
  throw GenerationError("gen_problem: rejection budget of 100 exhausted");
}

Subspace gen_subspace_perturbation(Rng& rng, const Subspace& v,
                                   double target_gap) {
  if (!(target_gap >= 0.0) || target_gap >= 1.0) {
    throw ParameterError(
        "gen_subspace_perturbation: target gap must lie in [0, 1)");
  }
  if (target_gap == 0.0) return v;
  if (v.is_trivial() || v.is_full()) {
    throw ParameterError(
        "gen_subspace_perturbation: a trivial or full subspace admits only "
        "gap 0");
  }

  const Index n = v.ambient_dim();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix direction = rng.gaussian_matrix(n, n);
    direction /= spectral_norm(direction);

    const auto candidate = [&](double eps) {
      return Subspace::from_spanning(
          (Matrix::Identity(n, n) + eps * direction) * v.basis());
    };
    // rank drops only at isolated eps values; report them as overshoot so
    // the bisection steers away
    const auto measured = [&](double eps) {
      const Subspace moved = candidate(eps);
      return moved.dim() == v.dim() ? gap(v, moved) : 2.0;
    };

    double lo = 0.0;
    double hi = 0.125;
    double hi_gap = measured(hi);
    bool bracketed = true;
    while (hi_gap < target_gap) {
      if (hi > 512.0) {
        bracketed = false;  // this direction cannot tilt v far enough
        break;
      }
      hi *= 1.8;
      hi_gap = measured(hi);
    }
    if (!bracketed) continue;

    double mid = hi;
    double mid_gap = hi_gap;
    for (int iter = 0; iter < 200 && std::abs(mid_gap - target_gap) > 1e-8;
         ++iter) {
      mid = 0.5 * (lo + hi);
      mid_gap = measured(mid);
      if (mid_gap < target_gap) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (std::abs(mid_gap - target_gap) <= 1e-6) return candidate(mid);
  }
  throw ParameterError(
      "gen_subspace_perturbation: target gap unreachable along the sampled "
      "directions");
}

Matrix gen_operator_perturbation(Rng& rng, const Matrix& a, const Matrix& g2,
                                 double target_product) {
  if (!(target_product >= 0.0)) {
    throw ParameterError(
        "gen_operator_perturbation: target product must be non-negative");
  }
  if (target_product == 0.0) return Matrix::Zero(a.rows(), a.cols());
  const double g2_norm = spectral_norm(g2);
  if (g2_norm == 0.0) {
    throw ParameterError(
        "gen_operator_perturbation: a zero inverse admits only product 0");
  }
  Matrix e = rng.gaussian_matrix(a.rows(), a.cols());
  const double e_norm = spectral_norm(e);
  if (e_norm == 0.0) {
    throw GenerationError("gen_operator_perturbation: degenerate draw");
  }
  return e * (target_product / (g2_norm * e_norm));
}

namespace {

TrialRecord run_trial(const TrialConfig& config, int trial_id) {
  TrialRecord record;
  record.trial_id = trial_id;
  Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(trial_id));

  try {
    GeneratedProblem problem =
        gen_problem(rng, config.n_x, config.n_y, config.t,
                    config.independent_s);
    const Matrix& a = problem.a;
    const Subspace& t = problem.t;
    const Subspace& s = problem.s;

    const OuterInverseSolution base = outer_inverse(a, t, s);
    const double kappa = base.kappa;
    record.kappa = kappa;

    const double threshold_t = 1.0 / ((1.0 + kappa) * (1.0 + kappa));
    const double threshold_s = 1.0 / (3.0 + kappa);
    const double threshold_e =
        2.0 * kappa / ((1.0 + kappa) * (4.0 + kappa));

    const bool t_perturbable = !t.is_trivial() && !t.is_full();
    const bool s_perturbable = !s.is_trivial() && !s.is_full();

    const Subspace t_prime =
        t_perturbable
            ? gen_subspace_perturbation(rng, t,
                                        config.gap_budget_t * threshold_t)
            : t;
    const Subspace s_prime =
        s_perturbable
            ? gen_subspace_perturbation(rng, s,
                                        config.gap_budget_s * threshold_s)
            : s;
    const Matrix e = gen_operator_perturbation(
        rng, a, base.g2, config.e_budget * threshold_e);

    record.delta_t = gap(t, t_prime);
    record.delta_s = gap(s, s_prime);
    record.e_product = spectral_norm(base.g2) * spectral_norm(e);

    const ImageGapResult image = image_gap_lemma23(a, t, s, t_prime);
    record.nullspace_disjoint_tprime = image.nullspace_disjoint;
    record.bounds.push_back(image.report);

    record.formula_rel_errors["perturb_t"] =
        perturb_t(a, t, s, t_prime).rel_error;
    for (auto& r : perturb_t_bounds(a, t, s, t_prime)) {
      record.bounds.push_back(std::move(r));
    }

    record.formula_rel_errors["perturb_s"] =
        perturb_s(a, t, s, s_prime).rel_error;
    for (auto& r : perturb_s_bounds(a, t, s, s_prime)) {
      record.bounds.push_back(std::move(r));
    }

    record.formula_rel_errors["perturb_ts"] =
        perturb_ts(a, t, s, t_prime, s_prime).rel_error;
    for (auto& r : perturb_ts_bounds(a, t, s, t_prime, s_prime)) {
      record.bounds.push_back(std::move(r));
    }

    record.formula_rel_errors["perturb_a"] = perturb_a(a, e, t, s).rel_error;
    for (auto& r : perturb_a_bounds(a, e, t, s)) {
      record.bounds.push_back(std::move(r));
    }

    const PerturbationScenario scenario{a, e, t, t_prime, s, s_prime};
    record.formula_rel_errors["perturb_full"] =
        perturb_full(scenario).rel_error;
    for (auto& r : perturb_full_bounds(scenario)) {
      record.bounds.push_back(std::move(r));
    }

    record.pass = record.nullspace_disjoint_tprime;
    for (const auto& [name, err] : record.formula_rel_errors) {
      if (!(err < config.tolerances.formula_rel)) record.pass = false;
    }
    for (const auto& bound : record.bounds) {
      if (bound.hypothesis.satisfied &&
          !(bound.lhs <=
            bound.rhs * (1.0 + config.tolerances.bound_slack_rel) +
                config.tolerances.bound_slack_abs)) {
        record.pass = false;
      }
    }
  } catch (const GenerationError& ex) {
    throw GenerationError("trial " + std::to_string(trial_id) + ": " +
                          ex.what());
  } catch (const Error& ex) {
    record.pass = false;
    record.error = ex.what();
  }
  return record;
}

}  // namespace

SuiteAggregates aggregate_records(const std::vector<TrialRecord>& records) {
  SuiteAggregates agg;
  double kappa_sum = 0.0;
  bool first = true;
  for (const auto& record : records) {
    if (!record.pass) ++agg.failures;
    if (record.error.empty()) {
      if (first) {
        agg.kappa_min = agg.kappa_max = record.kappa;
        first = false;
      } else {
        agg.kappa_min = std::min(agg.kappa_min, record.kappa);
        agg.kappa_max = std::max(agg.kappa_max, record.kappa);
      }
      kappa_sum += record.kappa;
    }
    for (const auto& [name, err] : record.formula_rel_errors) {
      auto it = agg.max_rel_error.find(name);
      if (it == agg.max_rel_error.end()) {
        agg.max_rel_error[name] = err;
      } else {
        it->second = std::max(it->second, err);
      }
    }
    for (const auto& bound : record.bounds) {
      const std::string hyp = hypothesis_name_str(bound.hypothesis.name);
      agg.hypothesis_total[hyp] += 1;
      if (bound.hypothesis.satisfied) {
        agg.hypothesis_satisfied[hyp] += 1;
        if (std::isfinite(bound.ratio)) {
          auto it = agg.max_bound_ratio.find(bound.name);
          if (it == agg.max_bound_ratio.end()) {
            agg.max_bound_ratio[bound.name] = bound.ratio;
          } else {
            it->second = std::max(it->second, bound.ratio);
          }
        }
      }
    }
  }
  const std::size_t counted =
      static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                             [](const TrialRecord& r) {
                                               return r.error.empty();
                                             }));
  agg.kappa_mean = counted > 0 ? kappa_sum / static_cast<double>(counted) : 0.0;
  return agg;
}

SuiteReport run_suite(const TrialConfig& config, int threads) {
  if (config.trials < 0) {
    throw ParameterError("run_suite: trial count must be non-negative");
  }
  if (config.n_x < 2 || config.n_x > 20 || config.n_y < 2 || config.n_y > 20) {
    throw ParameterError("run_suite: ambient dimensions must lie in [2, 20]");
  }
  if (config.t < 1 || config.t > std::min(config.n_x, config.n_y)) {
    throw ParameterError("run_suite: need 1 <= t <= min(n_X, n_Y)");
  }
  const auto budget_ok = [](double b) { return b >= 0.0 && b < 1.0; };
  if (!budget_ok(config.gap_budget_t) || !budget_ok(config.gap_budget_s) ||
      !budget_ok(config.e_budget)) {
    throw ParameterError("run_suite: budgets must lie in [0, 1)");
  }

  SuiteReport report;
  report.config = config;
  report.records.resize(static_cast<std::size_t>(config.trials));

  const int n_workers =
      std::max(1, std::min(threads, config.trials > 0 ? config.trials : 1));
  if (n_workers == 1) {
    for (int i = 0; i < config.trials; ++i) {
      report.records[static_cast<std::size_t>(i)] = run_trial(config, i);
    }
  } else {
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int i = w; i < config.trials; i += n_workers) {
            report.records[static_cast<std::size_t>(i)] = run_trial(config, i);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    if (failure) std::rethrow_exception(failure);
  }

  report.aggregates = aggregate_records(report.records);
  return report;
}

}  // namespace outerinv
