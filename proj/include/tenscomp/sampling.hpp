#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// An observed sample set plus an optional partition of its canonical support
// into disjoint parts (for solvers that want a fresh slice per update).
struct SamplePlan {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string tensor_path;  // provenance only, may be empty
  SparseSymmetricTensor full_omega;
  std::vector<std::vector<Triple>> partitions;
};

// Independently keeps each canonical triple i <= j <= k with probability p
// (its whole permutation orbit becomes observed), storing the model's entry
// value.  Canonical triples are visited in lexicographic order with one
// uniform draw each, so the result is a pure function of (truth, p, seed).
SparseSymmetricTensor sample_bernoulli(const FactorModel& truth, double p,
                                       std::uint64_t seed);

// Random partition of omega's canonical support into `parts` disjoint sets
// whose sizes differ by at most one.
SamplePlan split_samples(const SparseSymmetricTensor& omega, int parts,
                         std::uint64_t seed);

// Sub-tensor holding exactly the given canonical triples of omega.
SparseSymmetricTensor restrict_to(const SparseSymmetricTensor& omega,
                                  std::span<const Triple> part);

// Single-partition plan for solvers that reuse all samples every step.
SamplePlan make_reuse_plan(SparseSymmetricTensor omega, double p,
                           std::uint64_t seed);

}  // namespace tenscomp
