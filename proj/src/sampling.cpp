#include "tenscomp/sampling.hpp"

#include <utility>

#include "tenscomp/rng.hpp"

namespace tenscomp {

SparseSymmetricTensor sample_bernoulli(const FactorModel& truth, double p,
                                       std::uint64_t seed) {
  truth.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("sampling probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<TensorEntry> entries;
  const int n = truth.n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double u = uniform01(rng);
        if (u < p) entries.push_back({i, j, k, eval_entry(truth, i, j, k)});
      }
  return SparseSymmetricTensor(n, std::move(entries));
}

SamplePlan split_samples(const SparseSymmetricTensor& omega, int parts,
                         std::uint64_t seed) {
  if (parts < 1) throw DomainError("need at least one part");
  const std::size_t total = omega.nnz();
  if (static_cast<std::size_t>(parts) > total)
    throw DegenerateError("more parts than observed triples");
  std::vector<Triple> keys;
  keys.reserve(total);
  for (const TensorEntry& e : omega.entries()) keys.push_back({e.i, e.j, e.k});
  Rng rng(seed);
  for (std::size_t i = total; i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(keys[i - 1], keys[j]);
  }
  SamplePlan plan;
  plan.seed = seed;
  plan.full_omega = omega;
  plan.partitions.resize(parts);
  const std::size_t base = total / parts;
  const std::size_t extra = total % parts;
  std::size_t pos = 0;
  for (int part = 0; part < parts; ++part) {
    std::size_t size = base + (static_cast<std::size_t>(part) < extra ? 1 : 0);
    plan.partitions[part].assign(keys.begin() + pos, keys.begin() + pos + size);
    pos += size;
  }
  return plan;
}

SparseSymmetricTensor restrict_to(const SparseSymmetricTensor& omega,
                                  std::span<const Triple> part) {
  std::vector<TensorEntry> entries;
  entries.reserve(part.size());
  for (const Triple& t : part) {
    if (!omega.contains(t.i, t.j, t.k))
      throw MembershipError("triple (" + std::to_string(t.i) + "," +
                            std::to_string(t.j) + "," + std::to_string(t.k) +
                            ") not in the sample support");
    entries.push_back({t.i, t.j, t.k, omega.value(t.i, t.j, t.k)});
  }
  return SparseSymmetricTensor(omega.dim(), std::move(entries));
}

SamplePlan make_reuse_plan(SparseSymmetricTensor omega, double p,
                           std::uint64_t seed) {
  SamplePlan plan;
  plan.p = p;
  plan.seed = seed;
  plan.full_omega = std::move(omega);
  return plan;
}

}  // namespace tenscomp
