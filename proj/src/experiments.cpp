#include "tenscomp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "tenscomp/metrics.hpp"
#include "tenscomp/parallel.hpp"
#include "tenscomp/rng.hpp"
#include "tenscomp/rtpm.hpp"
#include "tenscomp/spectral.hpp"

namespace tenscomp {

CompletionOutcome complete_tensor(const SparseSymmetricTensor& omega, double p,
                                  int r, const CompletionSetup& setup,
                                  std::uint64_t seed,
                                  const FactorModel* truth) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  RtpmConfig rtpm = RtpmConfig::defaults(omega.dim(), r, p, derive_seed(seed, 0));
  if (setup.rtpm_trials > 0) rtpm.trials_per_component = setup.rtpm_trials;
  if (setup.rtpm_iters > 0) rtpm.iters_per_trial = setup.rtpm_iters;
  FactorModel init = rtpm_extract(omega, rtpm);
  if (setup.mu > 0.0) init = clip_to_incoherent(init, setup.mu);

  AltMinConfig alt;
  alt.outer_iters = setup.tau;
  alt.rank = r;
  alt.epsilon = setup.epsilon;
  alt.sample_mode = setup.sample_mode;
  alt.gauss_seidel = setup.gauss_seidel;

  SamplePlan plan;
  if (setup.sample_mode == SampleMode::split) {
    plan = split_samples(omega, r * setup.tau, derive_seed(seed, 1));
    plan.p = p;
  } else {
    plan = make_reuse_plan(omega, p, seed);
  }

  CompletionOutcome out;
  auto [model, trace] = outer_loop(plan, init, alt, truth);
  out.model = std::move(model);
  out.trace = std::move(trace);
  out.final_fit = out.trace.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : out.trace.rows.back().fit_error;
  out.final_rmse = truth ? rmse(out.model, *truth)
                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<double> alpha_grid(double alpha_min, double alpha_max, int steps) {
  if (steps < 1) throw DomainError("grid needs at least one point");
  if (!(alpha_min > 0.0) || alpha_max < alpha_min)
    throw DomainError("need 0 < alpha_min <= alpha_max");
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = alpha_min;
    return grid;
  }
  const double step = (alpha_max - alpha_min) / (steps - 1);
  for (int s = 0; s < steps; ++s) grid[s] = alpha_min + step * s;
  return grid;
}

std::vector<PhaseRow> phase_sweep(const PhaseSweepConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("need at least one trial per cell");
  const std::vector<double> alphas =
      alpha_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps);

  std::vector<PhaseRow> rows;
  for (int n : cfg.n_list)
    for (int r : cfg.r_list)
      for (double rho : cfg.rho_list)
        for (double alpha : alphas) {
          if (!(rho >= 0.0 && rho < 1.0))
            throw DomainError("rho must lie in [0, 1)");
          PhaseRow row;
          row.n = n;
          row.r = r;
          row.rho = rho;
          row.alpha = alpha;
          double p = alpha * std::sqrt(static_cast<double>(r)) *
                     std::log(static_cast<double>(n)) /
                     ((1.0 - rho) * std::pow(static_cast<double>(n), 1.5));
          row.clamped = p > 1.0;
          row.p = std::min(p, 1.0);
          row.trials = cfg.trials;
          rows.push_back(row);
        }

  CompletionSetup setup;
  setup.tau = cfg.tau;
  setup.sample_mode = cfg.sample_mode;

  std::vector<std::atomic<int>> successes(rows.size());
  for (auto& s : successes) s.store(0);
  const std::size_t total_trials = rows.size() * static_cast<std::size_t>(cfg.trials);
  parallel_for(total_trials, cfg.threads, [&](std::size_t job) {
    const std::size_t cell = job / cfg.trials;
    PhaseRow& row = rows[cell];
    const std::uint64_t trial_seed = derive_seed(cfg.seed, job);
    std::vector<double> ones(row.r, 1.0);
    FactorModel truth =
        row.rho == 0.0
            ? generate_orthogonal_model(row.n, row.r, ones,
                                        derive_seed(trial_seed, 0))
            : generate_correlated_model(row.n, row.r, row.rho, ones,
                                        derive_seed(trial_seed, 0));
    SparseSymmetricTensor omega =
        sample_bernoulli(truth, row.p, derive_seed(trial_seed, 1));
    CompletionSetup local = setup;
    local.mu = incoherence(truth);
    bool recovered = false;
    try {
      CompletionOutcome out = complete_tensor(omega, row.p, row.r, local,
                                              derive_seed(trial_seed, 2), &truth);
      recovered = out.final_rmse < cfg.threshold;
    } catch (const DegenerateError&) {
      recovered = false;  // unusable sample at this density
    } catch (const ScaleError&) {
      recovered = false;
    }
    if (recovered) successes[cell].fetch_add(1);
  });

  for (std::size_t c = 0; c < rows.size(); ++c)
    rows[c].recovery_rate =
        static_cast<double>(successes[c].load()) / cfg.trials;
  return rows;
}

ConvergenceRunResult convergence_run(const ConvergenceRunConfig& cfg) {
  std::vector<double> ones(cfg.r, 1.0);
  ConvergenceRunResult result;
  result.truth =
      cfg.rho == 0.0
          ? generate_orthogonal_model(cfg.n, cfg.r, ones, derive_seed(cfg.seed, 0))
          : generate_correlated_model(cfg.n, cfg.r, cfg.rho, ones,
                                      derive_seed(cfg.seed, 0));
  double p = cfg.alpha * std::sqrt(static_cast<double>(cfg.r)) *
             std::log(static_cast<double>(cfg.n)) /
             ((1.0 - cfg.rho) * std::pow(static_cast<double>(cfg.n), 1.5));
  p = std::min(p, 1.0);
  SparseSymmetricTensor omega =
      sample_bernoulli(result.truth, p, derive_seed(cfg.seed, 1));

  if (cfg.init_from_truth) {
    AltMinConfig alt;
    alt.outer_iters = cfg.tau;
    alt.rank = cfg.r;
    alt.epsilon = cfg.epsilon;
    alt.sample_mode = cfg.sample_mode;
    SamplePlan plan;
    if (cfg.sample_mode == SampleMode::split) {
      plan = split_samples(omega, cfg.r * cfg.tau, derive_seed(cfg.seed, 3));
      plan.p = p;
    } else {
      plan = make_reuse_plan(omega, p, cfg.seed);
    }
    auto [model, trace] = outer_loop(plan, result.truth, alt, &result.truth);
    result.outcome.model = std::move(model);
    result.outcome.trace = std::move(trace);
    result.outcome.final_fit = result.outcome.trace.rows.back().fit_error;
    result.outcome.final_rmse = rmse(result.outcome.model, result.truth);
    return result;
  }

  CompletionSetup setup;
  setup.tau = cfg.tau;
  setup.epsilon = cfg.epsilon;
  setup.sample_mode = cfg.sample_mode;
  setup.mu = incoherence(result.truth);
  result.outcome = complete_tensor(omega, p, cfg.r, setup,
                                   derive_seed(cfg.seed, 2), &result.truth);
  return result;
}

std::vector<SpectralRow> spectral_sweep(int n, int r,
                                        const std::vector<double>& alphas,
                                        int seeds, int restarts, int iters,
                                        std::uint64_t master_seed, int threads) {
  if (seeds < 1) throw DomainError("need at least one seed");
  if (r < 1) throw DomainError("rank must be positive");
  std::vector<SpectralRow> rows(alphas.size() * static_cast<std::size_t>(seeds));
  parallel_for(rows.size(), threads, [&](std::size_t job) {
    const std::size_t a = job / seeds;
    const int s = static_cast<int>(job % seeds);
    const std::uint64_t trial_seed = derive_seed(master_seed, job);
    SpectralRow row;
    row.n = n;
    row.alpha = alphas[a];
    row.p = std::min(1.0, alphas[a] / std::pow(static_cast<double>(n), 1.5));
    row.seed = trial_seed;
    std::vector<double> ones(r, 1.0);
    FactorModel truth =
        generate_orthogonal_model(n, r, ones, derive_seed(trial_seed, 0));
    SparseSymmetricTensor omega =
        sample_bernoulli(truth, row.p, derive_seed(trial_seed, 1));
    row.ratio = centered_norm_ratio(truth, omega, row.p, restarts, iters,
                                    derive_seed(trial_seed, 2));
    rows[job] = row;
    (void)s;
  });
  return rows;
}

double loglog_slope(const std::vector<SpectralRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const SpectralRow& row : rows) {
    if (!(row.ratio > 0.0) || !(row.alpha > 0.0)) continue;
    double x = std::log(row.alpha);
    double y = std::log(row.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw DomainError("need at least two usable points for a slope");
  double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("alpha values are all equal");
  return (m * sxy - sx * sy) / denom;
}

Max3linRate max3lin_success_rate(int n, double p, int trials,
                                 std::uint64_t master_seed,
                                 const Max3linOptions& opts, int threads) {
  if (trials < 1) throw DomainError("need at least one trial");
  std::atomic<int> successes{0};
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(master_seed, t);
    Lin3Instance inst = generate_planted(n, p, derive_seed(trial_seed, 0));
    if (inst.equations.empty()) return;  // nothing to solve; counts as a miss
    Max3linOptions local = opts;
    local.p = p;
    local.seed = derive_seed(trial_seed, 1);
    Max3linResult res = solve_as_completion(inst, local);
    if (res.success) successes.fetch_add(1);
  });
  Max3linRate rate;
  rate.trials = trials;
  rate.successes = successes.load();
  rate.rate = static_cast<double>(rate.successes) / trials;
  return rate;
}

}  // namespace tenscomp
