#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/sampling.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// split: each (outer iteration, component) update consumes its own partition
// of the samples, in (iteration, component) lexicographic order.
// reuse: every update sees all samples.
enum class SampleMode { split, reuse };

struct AltMinConfig {
  int outer_iters = 50;
  int rank = 1;
  // Stop once fit_error drops to this level.
  double epsilon = 1e-9;
  SampleMode sample_mode = SampleMode::reuse;
  // Coordinates whose least-squares denominator falls below this are zeroed
  // instead of divided.
  double min_denominator = 1e-14;
  // Commit each component as soon as it is solved instead of once per outer
  // iteration.
  bool gauss_seidel = false;
  // Re-clip the iterate to `reclip_mu` incoherence after each outer iteration.
  bool reclip = false;
  double reclip_mu = 0.0;
};

struct TraceRow {
  int iter = 0;
  double fit_error = 0.0;
  double rmse = 0.0;        // NaN when no reference model was supplied
  double d_infinity = 0.0;  // NaN when unavailable
  double seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
};

// Solves the one-component least squares over the observed triples of
// `part`: coordinate i of the raw solution is
//   sum_{(j,k) completing an observed triple} u_q(j) u_q(k) R_ijk
//   / sum_{(j,k)} u_q(j)^2 u_q(k)^2,
// where R is the observation minus every other component's contribution.
// Near-zero denominators zero the coordinate.  Returns the normalized vector
// and its pre-normalization Euclidean norm (the new weight).
std::pair<Eigen::VectorXd, double> inner_update(
    const SparseSymmetricTensor& part, const FactorModel& model, int q,
    double min_denominator);

// ||P_Omega(T - T_hat)||_F / ||P_Omega(T)||_F, orbit-weighted.
double fit_error(const SparseSymmetricTensor& omega, const FactorModel& model);

// Runs outer_iters sweeps of per-component least squares starting from
// `init`.  When `truth` is given, each trace row also carries rmse (and
// alignment distance if truth is orthogonal).
std::pair<FactorModel, ConvergenceTrace> outer_loop(
    const SamplePlan& plan, const FactorModel& init, const AltMinConfig& cfg,
    const FactorModel* truth = nullptr);

}  // namespace tenscomp
