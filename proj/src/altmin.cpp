#include "tenscomp/altmin.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "tenscomp/metrics.hpp"
#include "tenscomp/rtpm.hpp"

namespace tenscomp {

std::pair<Eigen::VectorXd, double> inner_update(
    const SparseSymmetricTensor& part, const FactorModel& model, int q,
    double min_denominator) {
  if (model.n != part.dim()) throw ShapeError("model and part dimensions differ");
  if (q < 0 || q >= model.r) throw BoundsError("component index out of range");
  if (part.empty()) throw DegenerateError("update part holds no samples");

  const int n = model.n;
  const int r = model.r;
  Eigen::VectorXd num = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd uq = model.vectors.col(q);

  for (const TensorEntry& e : part.closure()) {
    double resid = e.value;
    for (int l = 0; l < r; ++l) {
      if (l == q) continue;
      resid -= model.sigmas[l] * model.vectors(e.i, l) * model.vectors(e.j, l) *
               model.vectors(e.k, l);
    }
    const double w = uq[e.j] * uq[e.k];
    num[e.i] += w * resid;
    den[e.i] += w * w;
  }

  Eigen::VectorXd raw = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (den[i] >= min_denominator) raw[i] = num[i] / den[i];

  double weight = raw.norm();
  if (weight <= 0.0)
    throw DegenerateError("inner update collapsed to the zero vector");
  return {raw / weight, weight};
}

double fit_error(const SparseSymmetricTensor& omega, const FactorModel& model) {
  if (model.n != omega.dim())
    throw ShapeError("model and sample dimensions differ");
  if (omega.empty()) throw ScaleError("fit error undefined on empty support");
  double num = 0.0;
  double den = 0.0;
  for (const TensorEntry& e : omega.entries()) {
    const double w = SparseSymmetricTensor::orbit_size(e.i, e.j, e.k);
    const double diff = e.value - eval_entry(model, e.i, e.j, e.k);
    num += w * diff * diff;
    den += w * e.value * e.value;
  }
  if (den <= 0.0) throw ScaleError("observed tensor has zero norm");
  return std::sqrt(num / den);
}

std::pair<FactorModel, ConvergenceTrace> outer_loop(
    const SamplePlan& plan, const FactorModel& init, const AltMinConfig& cfg,
    const FactorModel* truth) {
  init.validate();
  if (cfg.rank != init.r) throw ConfigError("config rank differs from init rank");
  if (cfg.outer_iters < 1) throw ConfigError("need at least one outer iteration");
  if (cfg.reclip && !(cfg.reclip_mu > 0.0))
    throw ConfigError("re-clipping requested without a positive mu");
  if (plan.full_omega.empty()) throw ScaleError("sample plan holds no entries");

  const int r = cfg.rank;
  const bool split = cfg.sample_mode == SampleMode::split;
  std::vector<SparseSymmetricTensor> parts;
  if (split) {
    const std::size_t needed =
        static_cast<std::size_t>(cfg.outer_iters) * static_cast<std::size_t>(r);
    if (plan.partitions.size() < needed)
      throw ConfigError("plan provides " + std::to_string(plan.partitions.size()) +
                        " parts, need " + std::to_string(needed));
    parts.reserve(needed);
    for (std::size_t idx = 0; idx < needed; ++idx)
      parts.push_back(restrict_to(plan.full_omega, plan.partitions[idx]));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  FactorModel model = init;
  ConvergenceTrace trace;
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();

  for (int t = 0; t < cfg.outer_iters; ++t) {
    if (cfg.gauss_seidel) {
      for (int q = 0; q < r; ++q) {
        const SparseSymmetricTensor& part =
            split ? parts[static_cast<std::size_t>(t) * r + q] : plan.full_omega;
        auto [u, w] = inner_update(part, model, q, cfg.min_denominator);
        model.vectors.col(q) = u;
        model.sigmas[q] = w;
        model.orthogonal = false;
      }
    } else {
      Eigen::MatrixXd staged_vectors(model.n, r);
      Eigen::VectorXd staged_weights(r);
      for (int q = 0; q < r; ++q) {
        const SparseSymmetricTensor& part =
            split ? parts[static_cast<std::size_t>(t) * r + q] : plan.full_omega;
        auto [u, w] = inner_update(part, model, q, cfg.min_denominator);
        staged_vectors.col(q) = u;
        staged_weights[q] = w;
      }
      model.vectors = staged_vectors;
      model.sigmas = staged_weights;
      model.orthogonal = false;
    }
    if (cfg.reclip) model = clip_to_incoherent(model, cfg.reclip_mu);

    TraceRow row;
    row.iter = t + 1;
    row.fit_error = fit_error(plan.full_omega, model);
    row.rmse = truth ? rmse(model, *truth) : nan;
    row.d_infinity = (truth && truth->orthogonal)
                         ? align_factors(model, *truth).d_infinity
                         : nan;
    row.seconds =
        std::chrono::duration<double>(clock::now() - started).count();
    trace.rows.push_back(row);
    if (row.fit_error <= cfg.epsilon) break;
  }
  return {model, trace};
}

}  // namespace tenscomp
