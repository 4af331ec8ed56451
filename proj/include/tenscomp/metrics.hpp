#pragma once

#include <vector>

#include "tenscomp/factor_model.hpp"

namespace tenscomp {

// Result of matching estimated components against a reference model.
// Entry l describes estimated component l: the true component it was matched
// to, the sign applied to the estimated vector, and the errors afterwards.
struct AlignmentReport {
  std::vector<int> permutation;      // estimated index -> true index
  std::vector<int> signs;            // +-1 per estimated component
  std::vector<double> vector_error;  // ||s * u_l - u*_{perm(l)}||_2
  std::vector<double> sigma_error;   // |sigma_l - sigma*_{perm(l)}| / |sigma*|
  double d_infinity = 0.0;           // max_l (vector_error + sigma_error)
};

// Greedy matching: estimated components in index order each claim the
// unmatched true component with the largest |<u_est, u_true>|, then the sign
// making the inner product nonnegative is applied.  Requires matching (n, r)
// and an orthogonal truth.
AlignmentReport align_factors(const FactorModel& estimate,
                              const FactorModel& truth);

// ||T_est - T_truth||_F / ||T_truth||_F via the Gram identity; neither tensor
// is materialized.
double rmse(const FactorModel& estimate, const FactorModel& truth);

// Checks ||T - T_hat||_F <= 4 sqrt(r) ||T||_F eps for index-aligned models
// whose per-component errors are within eps (vector distance <= eps,
// relative weight error <= eps).  Violated entry conditions throw
// PreconditionError; the verdict on the tensor-level bound is the return.
bool frobenius_error_bound_check(const FactorModel& truth,
                                 const FactorModel& estimate, double eps);

}  // namespace tenscomp
