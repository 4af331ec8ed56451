#include "tenscomp/max3lin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "tenscomp/rng.hpp"
#include "tenscomp/rtpm.hpp"
#include "tenscomp/sampling.hpp"

namespace tenscomp {

void Lin3Instance::validate() const {
  if (n < 3) throw ShapeError("instance needs at least three variables");
  for (const Lin3Equation& e : equations) {
    if (!(0 <= e.i && e.i < e.j && e.j < e.k && e.k < n))
      throw DomainError("equation indices must be strictly increasing in [0, n)");
    if (e.rhs != 1 && e.rhs != -1)
      throw DomainError("right-hand side must be +1 or -1");
  }
  if (planted) {
    if (static_cast<int>(planted->size()) != n)
      throw ShapeError("planted assignment length mismatch");
    for (int v : *planted)
      if (v != 1 && v != -1) throw DomainError("planted values must be +-1");
  }
}

int Lin3Instance::satisfied_count(const std::vector<int>& assignment) const {
  if (static_cast<int>(assignment.size()) != n)
    throw ShapeError("assignment length mismatch");
  int count = 0;
  for (const Lin3Equation& e : equations)
    if (assignment[e.i] * assignment[e.j] * assignment[e.k] == e.rhs) ++count;
  return count;
}

Lin3Instance generate_planted(int n, double p, std::uint64_t seed) {
  if (n < 3) throw ShapeError("instance needs at least three variables");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i) x[i] = (rng() & 1) ? -1 : 1;
  Lin3Instance inst;
  inst.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (uniform01(rng) < p)
          inst.equations.push_back({i, j, k, x[i] * x[j] * x[k]});
  inst.planted = std::move(x);
  return inst;
}

Max3linResult solve_as_completion(const Lin3Instance& inst,
                                  const Max3linOptions& opts) {
  inst.validate();
  if (inst.equations.empty())
    throw PreconditionError("instance has no equations");
  Max3linResult res;
  res.total = static_cast<int>(inst.equations.size());
  res.assignment.assign(inst.n, 1);

  const double strict_triples = static_cast<double>(inst.n) * (inst.n - 1) *
                                (inst.n - 2) / 6.0;
  double p = opts.p > 0.0
                 ? opts.p
                 : static_cast<double>(inst.equations.size()) / strict_triples;
  if (!(p > 0.0 && p <= 1.0)) p = std::min(1.0, std::max(p, 1e-12));

  try {
    std::vector<TensorEntry> entries;
    entries.reserve(inst.equations.size());
    for (const Lin3Equation& e : inst.equations)
      entries.push_back({e.i, e.j, e.k, static_cast<double>(e.rhs)});
    SparseSymmetricTensor omega(inst.n, std::move(entries));

    RtpmConfig rtpm = RtpmConfig::defaults(inst.n, 1, p, derive_seed(opts.seed, 0));
    if (opts.rtpm_trials > 0) rtpm.trials_per_component = opts.rtpm_trials;
    if (opts.rtpm_iters > 0) rtpm.iters_per_trial = opts.rtpm_iters;
    FactorModel init = rtpm_extract(omega, rtpm);
    if (opts.mu > 0.0) init = clip_to_incoherent(init, opts.mu);

    AltMinConfig alt;
    alt.rank = 1;
    alt.outer_iters = opts.tau;
    alt.sample_mode = opts.sample_mode;
    SamplePlan plan;
    if (opts.sample_mode == SampleMode::split) {
      plan = split_samples(omega, opts.tau, derive_seed(opts.seed, 1));
      plan.p = p;
    } else {
      plan = make_reuse_plan(omega, p, opts.seed);
    }
    auto [model, trace] = outer_loop(plan, init, alt);

    for (int i = 0; i < inst.n; ++i)
      res.assignment[i] = model.vectors(i, 0) < 0.0 ? -1 : 1;
  } catch (const DegenerateError&) {
    // solver collapse: fall through with the all-ones assignment
  }

  int straight = inst.satisfied_count(res.assignment);
  std::vector<int> flipped(res.assignment);
  for (int& v : flipped) v = -v;
  int inverted = inst.satisfied_count(flipped);
  if (inverted > straight) {
    res.assignment = std::move(flipped);
    res.satisfied = inverted;
  } else {
    res.satisfied = straight;
  }
  res.success = res.satisfied == res.total;
  return res;
}

std::vector<std::vector<int>> brute_force_solutions(const Lin3Instance& inst) {
  inst.validate();
  if (inst.n > 24)
    throw ScaleError("exhaustive enumeration capped at 24 variables");
  std::vector<std::vector<int>> solutions;
  const std::uint32_t limit = 1u << inst.n;
  std::vector<int> x(inst.n);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    for (int i = 0; i < inst.n; ++i) x[i] = (mask >> i) & 1u ? -1 : 1;
    if (inst.satisfied_count(x) == static_cast<int>(inst.equations.size()))
      solutions.push_back(x);
  }
  return solutions;
}

namespace {

struct PropagationSearch {
  const std::vector<std::array<int, 3>>& edges;
  std::uint64_t full;
  std::size_t budget;
  std::unordered_set<std::uint64_t> failed;
  std::size_t visited = 0;
  std::vector<std::array<int, 3>> path;
  bool out_of_budget = false;

  static std::uint64_t edge_bits(const std::array<int, 3>& e) {
    return (1ull << e[0]) | (1ull << e[1]) | (1ull << e[2]);
  }

  bool dfs(std::uint64_t covered) {
    if (covered == full) return true;
    if (++visited > budget) {
      out_of_budget = true;
      return false;
    }
    if (failed.count(covered)) return false;
    for (const auto& e : edges) {
      std::uint64_t bits = edge_bits(e);
      std::uint64_t overlap = bits & covered;
      if (std::popcount(overlap) != 2) continue;
      path.push_back(e);
      if (dfs(covered | bits)) return true;
      path.pop_back();
      if (out_of_budget) return false;
    }
    failed.insert(covered);
    return false;
  }
};

}  // namespace

PropagationResult propagation_connected(const Lin3Instance& inst,
                                        std::size_t state_budget) {
  inst.validate();
  if (inst.n > 60) throw ScaleError("propagation search capped at 60 variables");
  PropagationResult result;
  if (inst.equations.empty()) {
    result.status = PropagationResult::Status::disconnected;
    return result;
  }
  std::vector<std::array<int, 3>> edges;
  edges.reserve(inst.equations.size());
  for (const Lin3Equation& e : inst.equations) edges.push_back({e.i, e.j, e.k});
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const std::uint64_t full = inst.n == 64 ? ~0ull : (1ull << inst.n) - 1;
  PropagationSearch search{edges, full, state_budget, {}, 0, {}, false};
  std::unordered_set<std::uint64_t> tried_starts;
  for (const auto& e : edges) {
    std::uint64_t bits = PropagationSearch::edge_bits(e);
    if (!tried_starts.insert(bits).second) continue;
    search.path.clear();
    search.path.push_back(e);
    if (search.dfs(bits)) {
      result.status = PropagationResult::Status::connected;
      result.sequence = search.path;
      return result;
    }
    if (search.out_of_budget) {
      result.status = PropagationResult::Status::indeterminate;
      return result;
    }
  }
  result.status = PropagationResult::Status::disconnected;
  return result;
}

Lin3Instance ambiguous_connected_instance() {
  Lin3Instance inst;
  inst.n = 5;
  inst.equations = {{0, 1, 2, 1}, {1, 2, 3, -1}, {2, 3, 4, 1}};
  return inst;
}

CounterexampleReport counterexample_report() {
  CounterexampleReport rep;
  rep.instance = ambiguous_connected_instance();
  PropagationResult prop = propagation_connected(rep.instance);
  rep.connected = prop.status == PropagationResult::Status::connected;
  rep.sequence = prop.sequence;
  rep.solutions = brute_force_solutions(rep.instance);
  return rep;
}

}  // namespace tenscomp
