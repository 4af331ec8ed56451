#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/rng.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// Views wrap "tensor-like" objects behind dim() + contract(x) = M[., x, x] so
// the same power iteration drives plain tensors, factor models, deflated
// residuals, and sampled-minus-scaled-truth differences.

struct SparseTensorView {
  const SparseSymmetricTensor* tensor;
  double rescale = 1.0;

  int dim() const { return tensor->dim(); }
  Eigen::VectorXd contract(const Eigen::VectorXd& x) const {
    return rescale * tensor->contract_mode1(x);
  }
};

struct FactorModelView {
  const FactorModel* model;

  int dim() const { return model->n; }
  Eigen::VectorXd contract(const Eigen::VectorXd& x) const {
    return contract_mode1(*model, x);
  }
};

// rescale * P_Omega(T) minus the rank-one terms extracted so far.
struct DeflatedTensorView {
  const SparseSymmetricTensor* tensor;
  double rescale = 1.0;
  const Eigen::MatrixXd* deflation_vectors = nullptr;  // n x d
  const Eigen::VectorXd* deflation_weights = nullptr;  // d
  int deflation_count = 0;

  int dim() const { return tensor->dim(); }
  Eigen::VectorXd contract(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v = rescale * tensor->contract_mode1(x);
    for (int m = 0; m < deflation_count; ++m) {
      double d = deflation_vectors->col(m).dot(x);
      v -= ((*deflation_weights)[m] * d * d) * deflation_vectors->col(m);
    }
    return v;
  }
};

// P_Omega(T) - p * T, kept implicit.
struct CenteredTensorView {
  const SparseSymmetricTensor* omega;
  const FactorModel* truth;
  double p;

  int dim() const { return truth->n; }
  Eigen::VectorXd contract(const Eigen::VectorXd& x) const {
    return omega->contract_mode1(x) - p * contract_mode1(*truth, x);
  }
};

// Best |M[x,x,x]| found by symmetric power iteration over `restarts` random
// unit starts (restart k draws its start from derive_seed(seed, k), so
// enlarging the restart budget keeps earlier starts and the estimate can only
// grow).  Zero operators return 0.
template <typename View>
double power_method_max(const View& view, int restarts, int iters,
                        std::uint64_t seed, double step_tol = 1e-13) {
  const int n = view.dim();
  double best = 0.0;
  for (int k = 0; k < restarts; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    Eigen::VectorXd x = random_unit_vector(n, rng);
    bool dead = false;
    for (int it = 0; it < iters; ++it) {
      Eigen::VectorXd y = view.contract(x);
      double ny = y.norm();
      if (ny <= 0.0) {
        dead = true;
        break;
      }
      y /= ny;
      double step = (y - x).norm();
      x = y;
      if (step <= step_tol) break;
    }
    if (dead) continue;
    double value = std::abs(x.dot(view.contract(x)));
    if (value > best) best = value;
  }
  return best;
}

// Lower-bound estimate of max_{|x|=1} |T[x,x,x]|.
double operator_norm_estimate(const SparseSymmetricTensor& t, int restarts,
                              int iters, std::uint64_t seed);
double operator_norm_estimate(const FactorModel& m, int restarts, int iters,
                              std::uint64_t seed);

}  // namespace tenscomp
