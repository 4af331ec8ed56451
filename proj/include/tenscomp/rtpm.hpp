#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// Budget and scaling for the robust tensor power method.
struct RtpmConfig {
  int rank = 1;
  int trials_per_component = 1;
  int iters_per_trial = 1;
  // Trials whose image collapses to zero are retried with fresh starts, up to
  // restart_budget_multiplier * trials_per_component attempts per component.
  int restart_budget_multiplier = 4;
  // Multiplied into every sampled-tensor contraction (callers pass 1/p so the
  // sampled tensor estimates the full one in expectation).
  double rescale = 1.0;
  std::uint64_t seed = 0;

  // Theory-guided budgets: L = ceil((r ln n)^2) trials and
  // N = ceil(10 (ln r + ln ln(p n^{3/2}))) steps per trial, floored at
  // L >= 8, N >= 10 so tiny instances keep a usable budget.
  static RtpmConfig defaults(int n, int rank, double p, std::uint64_t seed);
};

// One rescaled power step: normalize(rescale * T[., u, u]).  A zero image
// throws DegenerateError.
Eigen::VectorXd power_step(const SparseSymmetricTensor& t,
                           const Eigen::VectorXd& u, double rescale);

// Extracts `rank` components one at a time.  Per component: L random unit
// starts evolve through N power steps against the deflated tensor, the trial
// with the largest |Rayleigh quotient| wins (ties to the earliest trial), the
// winner gets N extra polish steps, and the final Rayleigh value becomes the
// component weight (sign included).  Extracted components are subtracted
// functionally during later contractions; nothing is densified.  Components
// are returned ordered by |weight|, largest first.
FactorModel rtpm_extract(const SparseSymmetricTensor& t,
                         const RtpmConfig& config);

// Caps every coordinate at mu/sqrt(n) in magnitude (keeping signs) and
// re-normalizes each changed column.  Weights pass through untouched; the
// orthogonality flag survives only if nothing changed.
FactorModel clip_to_incoherent(const FactorModel& m, double mu);

}  // namespace tenscomp
