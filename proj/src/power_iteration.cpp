#include "tenscomp/power_iteration.hpp"

namespace tenscomp {

double operator_norm_estimate(const SparseSymmetricTensor& t, int restarts,
                              int iters, std::uint64_t seed) {
  if (restarts < 1 || iters < 1)
    throw DomainError("restarts and iters must be positive");
  SparseTensorView view{&t, 1.0};
  return power_method_max(view, restarts, iters, seed);
}

double operator_norm_estimate(const FactorModel& m, int restarts, int iters,
                              std::uint64_t seed) {
  if (restarts < 1 || iters < 1)
    throw DomainError("restarts and iters must be positive");
  m.validate();
  FactorModelView view{&m};
  return power_method_max(view, restarts, iters, seed);
}

}  // namespace tenscomp
