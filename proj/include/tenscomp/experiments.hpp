#pragma once

#include <cstdint>
#include <vector>

#include "tenscomp/altmin.hpp"
#include "tenscomp/factor_model.hpp"
#include "tenscomp/max3lin.hpp"
#include "tenscomp/sampling.hpp"

namespace tenscomp {

// Knobs of the full recovery pipeline (initialize, clip, alternate).
struct CompletionSetup {
  int tau = 50;
  double epsilon = 1e-9;
  SampleMode sample_mode = SampleMode::reuse;
  double mu = 0.0;      // incoherence cap; 0 skips clipping
  int rtpm_trials = 0;  // 0 keeps theory defaults
  int rtpm_iters = 0;
  bool gauss_seidel = false;
};

struct CompletionOutcome {
  FactorModel model;
  ConvergenceTrace trace;
  double final_fit = 0.0;
  double final_rmse = 0.0;  // NaN without a reference
};

// Runs the pipeline on an observed tensor.  Substream use of `seed`:
// 0 initialization trials, 1 sample splitting.
CompletionOutcome complete_tensor(const SparseSymmetricTensor& omega, double p,
                                  int r, const CompletionSetup& setup,
                                  std::uint64_t seed,
                                  const FactorModel* truth = nullptr);

struct PhaseSweepConfig {
  std::vector<int> n_list{50};
  std::vector<int> r_list{3};
  std::vector<double> rho_list{0.0};
  double alpha_min = 1.0;
  double alpha_max = 12.0;
  int alpha_steps = 10;
  int trials = 40;
  double threshold = 1e-7;  // recovery iff rmse below this
  std::uint64_t seed = 0;
  SampleMode sample_mode = SampleMode::reuse;
  int tau = 50;
  int threads = 1;
};

struct PhaseRow {
  int n = 0;
  int r = 0;
  double rho = 0.0;
  double alpha = 0.0;
  double p = 0.0;
  double recovery_rate = 0.0;
  int trials = 0;
  bool clamped = false;  // p hit 1 before scaling asked for more
};

// Recovery rate over a grid: p = alpha sqrt(r) ln(n) / ((1 - rho) n^{3/2}),
// clamped to [0, 1].  Trial t of cell c uses seed derive(master, c*trials+t),
// so results are identical for any thread count.
std::vector<PhaseRow> phase_sweep(const PhaseSweepConfig& cfg);

// Evenly spaced alpha grid used by the sweep.
std::vector<double> alpha_grid(double alpha_min, double alpha_max, int steps);

struct ConvergenceRunConfig {
  int n = 50;
  int r = 3;
  double rho = 0.0;
  double alpha = 12.0;
  int tau = 100;
  double epsilon = 0.0;  // 0 disables early stopping
  SampleMode sample_mode = SampleMode::reuse;
  std::uint64_t seed = 0;
  bool init_from_truth = false;  // debug mode: skip initialization
};

struct ConvergenceRunResult {
  FactorModel truth;
  CompletionOutcome outcome;
};

ConvergenceRunResult convergence_run(const ConvergenceRunConfig& cfg);

struct SpectralRow {
  int n = 0;
  double p = 0.0;
  double alpha = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

// Spectral concentration sweep on unit-sigma planted models: p = alpha / n^{3/2}.
std::vector<SpectralRow> spectral_sweep(int n, int r,
                                        const std::vector<double>& alphas,
                                        int seeds, int restarts, int iters,
                                        std::uint64_t master_seed, int threads);

// Least-squares slope of log(ratio) against log(alpha).
double loglog_slope(const std::vector<SpectralRow>& rows);

struct Max3linRate {
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

// Planted instances at the given rate; solved via completion.
Max3linRate max3lin_success_rate(int n, double p, int trials,
                                 std::uint64_t master_seed,
                                 const Max3linOptions& opts, int threads);

}  // namespace tenscomp
