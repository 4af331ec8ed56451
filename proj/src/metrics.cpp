#include "tenscomp/metrics.hpp"

#include <cmath>
#include <limits>

namespace tenscomp {

namespace {

void check_pair(const FactorModel& a, const FactorModel& b) {
  a.validate();
  b.validate();
  if (a.n != b.n || a.r != b.r)
    throw ShapeError("models differ in (n, r)");
}

double cross_inner(const FactorModel& a, const FactorModel& b) {
  double acc = 0.0;
  for (int l = 0; l < a.r; ++l)
    for (int m = 0; m < b.r; ++m) {
      double d = a.vectors.col(l).dot(b.vectors.col(m));
      acc += a.sigmas[l] * b.sigmas[m] * d * d * d;
    }
  return acc;
}

}  // namespace

AlignmentReport align_factors(const FactorModel& estimate,
                              const FactorModel& truth) {
  check_pair(estimate, truth);
  if (!truth.orthogonal)
    throw PreconditionError("alignment reference must be orthogonal");
  const int r = estimate.r;
  AlignmentReport rep;
  rep.permutation.assign(r, -1);
  rep.signs.assign(r, 1);
  rep.vector_error.assign(r, 0.0);
  rep.sigma_error.assign(r, 0.0);
  std::vector<bool> taken(r, false);
  for (int l = 0; l < r; ++l) {
    int best = -1;
    double best_dot = -1.0;
    for (int m = 0; m < r; ++m) {
      if (taken[m]) continue;
      double d = std::abs(estimate.vectors.col(l).dot(truth.vectors.col(m)));
      if (d > best_dot) {
        best_dot = d;
        best = m;
      }
    }
    taken[best] = true;
    rep.permutation[l] = best;
    double raw = estimate.vectors.col(l).dot(truth.vectors.col(best));
    rep.signs[l] = raw < 0.0 ? -1 : 1;
    rep.vector_error[l] =
        (rep.signs[l] * estimate.vectors.col(l) - truth.vectors.col(best))
            .norm();
    double st = truth.sigmas[best];
    if (st == 0.0) throw ScaleError("true component weight is zero");
    rep.sigma_error[l] = std::abs(estimate.sigmas[l] - st) / std::abs(st);
  }
  rep.d_infinity = 0.0;
  for (int l = 0; l < r; ++l)
    rep.d_infinity =
        std::max(rep.d_infinity, rep.vector_error[l] + rep.sigma_error[l]);
  return rep;
}

double rmse(const FactorModel& estimate, const FactorModel& truth) {
  check_pair(estimate, truth);
  double nt = frobenius_norm(truth);
  if (nt == 0.0) throw ScaleError("reference tensor has zero norm");
  double ne = frobenius_norm(estimate);
  double diff2 = nt * nt + ne * ne - 2.0 * cross_inner(estimate, truth);
  if (diff2 < 0.0) diff2 = 0.0;
  return std::sqrt(diff2) / nt;
}

bool frobenius_error_bound_check(const FactorModel& truth,
                                 const FactorModel& estimate, double eps) {
  check_pair(estimate, truth);
  if (eps < 0.0 || !std::isfinite(eps))
    throw PreconditionError("eps must be nonnegative and finite");
  // hair of slack so a perturbation constructed at exactly eps does not trip
  // on last-ulp rounding
  const double slack = 1e-12 * (1.0 + eps);
  for (int q = 0; q < truth.r; ++q) {
    double vec_err =
        (estimate.vectors.col(q) - truth.vectors.col(q)).norm();
    if (vec_err > eps + slack)
      throw PreconditionError("component " + std::to_string(q) +
                              " vector error exceeds eps");
    if (std::abs(estimate.sigmas[q] - truth.sigmas[q]) >
        std::abs(truth.sigmas[q]) * eps + slack)
      throw PreconditionError("component " + std::to_string(q) +
                              " weight error exceeds eps");
  }
  double nt = frobenius_norm(truth);
  double ne = frobenius_norm(estimate);
  double diff2 = nt * nt + ne * ne - 2.0 * cross_inner(estimate, truth);
  // the Gram route cancels three O(|T|^2) sums; below this floor the residual
  // is arithmetic noise, not distance
  if (diff2 < 1e-13 * (nt * nt + ne * ne)) diff2 = 0.0;
  return std::sqrt(diff2) <=
         4.0 * std::sqrt(static_cast<double>(truth.r)) * nt * eps;
}

}  // namespace tenscomp
