#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// Tripartite 3-uniform hypergraph: one hyperedge per observation, the three
// axes acting as the three vertex parts.
struct TripartiteGraph {
  std::array<int, 3> dims{0, 0, 0};
  std::vector<std::array<int, 3>> edges;
};

// Symmetric support as a tripartite graph, one edge per canonical triple.
TripartiteGraph to_tripartite(const SparseSymmetricTensor& omega);

struct HypergraphStats {
  std::array<int, 3> dims{0, 0, 0};
  std::size_t edge_count = 0;
  // Max vertex degrees per axis and max co-degrees per axis pair (12, 13, 23).
  std::array<std::size_t, 3> max_degree{0, 0, 0};
  std::array<std::size_t, 3> max_codegree{0, 0, 0};
  double p_hat = 0.0;  // edge_count / (n1 n2 n3)
};

HypergraphStats hypergraph_stats(const TripartiteGraph& g);

struct DegreeBoundReport {
  std::array<double, 6> observed{};  // deg1 deg2 deg3 deg12 deg13 deg23
  std::array<double, 6> bound{};
  std::array<bool, 6> pass{};
  bool all_pass = false;
};

// Checks the six sampled-degree bounds
//   deg_a(i)    <= 2 p n_b n_c + (8/3) ln(3 n_a / delta)
//   deg_ab(i,j) <= 2 p n_c     + (8/3) ln(3 n_a n_b / delta)
// for the given nominal sampling rate and failure budget delta.
DegreeBoundReport degree_bound_audit(const HypergraphStats& stats, double p,
                                     double delta);

enum class SubsetSampler { random, level_set };

struct DiscrepancySample {
  std::array<int, 3> sizes{0, 0, 0};
  std::size_t edges_inside = 0;
  double expected = 0.0;  // p |A1| |A2| |A3|
  bool check1 = false;    // edges_inside <= xi1 * expected
  bool check2 = false;    // e ln(e/expected) <= xi2 max_i |A_i| ln(e n_i/|A_i|)
  bool pass = false;      // check1 || check2
};

struct DiscrepancyAudit {
  std::vector<DiscrepancySample> samples;
  std::size_t skipped_draws = 0;  // empty subsets never evaluated
  bool all_pass = false;
};

// Draws `samples` subset triples (A1, A2, A3) -- uniformly random subsets of
// random sizes, or dyadic magnitude bands of random unit vectors -- and
// evaluates the edge-count discrepancy disjunction on each.
DiscrepancyAudit discrepancy_audit(const TripartiteGraph& g, double p,
                                   double xi1, double xi2,
                                   SubsetSampler sampler, int samples,
                                   std::uint64_t seed);

// Operator-norm estimate of P_Omega(T) - p T divided by
// max_entry(T) * n^{3/2} * p.
double centered_norm_ratio(const FactorModel& truth,
                           const SparseSymmetricTensor& omega, double p,
                           int restarts, int iters, std::uint64_t seed);

}  // namespace tenscomp
