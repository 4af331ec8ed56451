#include "tenscomp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tenscomp/power_iteration.hpp"
#include "tenscomp/rng.hpp"

namespace tenscomp {

TripartiteGraph to_tripartite(const SparseSymmetricTensor& omega) {
  TripartiteGraph g;
  g.dims = {omega.dim(), omega.dim(), omega.dim()};
  g.edges.reserve(omega.nnz());
  for (const TensorEntry& e : omega.entries())
    g.edges.push_back({e.i, e.j, e.k});
  return g;
}

HypergraphStats hypergraph_stats(const TripartiteGraph& g) {
  if (g.dims[0] <= 0 || g.dims[1] <= 0 || g.dims[2] <= 0)
    throw ShapeError("graph axis sizes must be positive");
  HypergraphStats s;
  s.dims = g.dims;
  s.edge_count = g.edges.size();
  std::array<std::vector<std::size_t>, 3> degree;
  for (int a = 0; a < 3; ++a) degree[a].assign(g.dims[a], 0);
  std::array<std::unordered_map<std::uint64_t, std::size_t>, 3> codegree;
  for (const auto& e : g.edges) {
    for (int a = 0; a < 3; ++a) {
      if (e[a] < 0 || e[a] >= g.dims[a])
        throw BoundsError("edge index outside its axis");
      ++degree[a][e[a]];
    }
    ++codegree[0][pack_triple(e[0], e[1], 0)];  // axes 1,2
    ++codegree[1][pack_triple(e[0], e[2], 0)];  // axes 1,3
    ++codegree[2][pack_triple(e[1], e[2], 0)];  // axes 2,3
  }
  for (int a = 0; a < 3; ++a) {
    for (std::size_t d : degree[a]) s.max_degree[a] = std::max(s.max_degree[a], d);
    for (const auto& [key, d] : codegree[a])
      s.max_codegree[a] = std::max(s.max_codegree[a], d);
  }
  s.p_hat = static_cast<double>(s.edge_count) /
            (static_cast<double>(g.dims[0]) * g.dims[1] * g.dims[2]);
  return s;
}

DegreeBoundReport degree_bound_audit(const HypergraphStats& stats, double p,
                                     double delta) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("delta must lie in (0, 1)");
  const double n1 = stats.dims[0], n2 = stats.dims[1], n3 = stats.dims[2];
  const double slack = 8.0 / 3.0;
  DegreeBoundReport rep;
  rep.observed = {static_cast<double>(stats.max_degree[0]),
                  static_cast<double>(stats.max_degree[1]),
                  static_cast<double>(stats.max_degree[2]),
                  static_cast<double>(stats.max_codegree[0]),
                  static_cast<double>(stats.max_codegree[1]),
                  static_cast<double>(stats.max_codegree[2])};
  rep.bound = {2.0 * p * n2 * n3 + slack * std::log(3.0 * n1 / delta),
               2.0 * p * n1 * n3 + slack * std::log(3.0 * n2 / delta),
               2.0 * p * n1 * n2 + slack * std::log(3.0 * n3 / delta),
               2.0 * p * n3 + slack * std::log(3.0 * n1 * n2 / delta),
               2.0 * p * n2 + slack * std::log(3.0 * n1 * n3 / delta),
               2.0 * p * n1 + slack * std::log(3.0 * n2 * n3 / delta)};
  rep.all_pass = true;
  for (int b = 0; b < 6; ++b) {
    rep.pass[b] = rep.observed[b] <= rep.bound[b];
    rep.all_pass = rep.all_pass && rep.pass[b];
  }
  return rep;
}

namespace {

// Uniformly random subset of the given nonzero size (partial Fisher-Yates).
std::vector<int> random_subset(int n, int size, Rng& rng) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < size; ++i) {
    std::size_t j = i + uniform_below(rng, static_cast<std::uint64_t>(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  return pool;
}

// Dyadic magnitude bands of a random unit vector:
// band u holds the coordinates with |x_i| in [delta 2^{u-1}, delta 2^u)/sqrt(n).
std::vector<std::vector<int>> magnitude_bands(int n, Rng& rng) {
  constexpr double kDelta = 0.5;
  Eigen::VectorXd x = random_unit_vector(n, rng);
  const double base = kDelta / std::sqrt(static_cast<double>(n));
  const int levels =
      std::max(1, static_cast<int>(std::ceil(std::log2(std::sqrt(
                      static_cast<double>(n)) / kDelta))) + 1);
  std::vector<std::vector<int>> bands(levels);
  for (int i = 0; i < n; ++i) {
    double mag = std::abs(x[i]);
    if (mag < base) continue;
    int u = static_cast<int>(std::floor(std::log2(mag / base))) + 1;
    u = std::clamp(u, 1, levels);
    bands[u - 1].push_back(i);
  }
  return bands;
}

}  // namespace

DiscrepancyAudit discrepancy_audit(const TripartiteGraph& g, double p,
                                   double xi1, double xi2,
                                   SubsetSampler sampler, int samples,
                                   std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  if (!(xi1 > 0.0) || !(xi2 > 0.0)) throw DomainError("xi factors must be positive");
  if (samples < 1) throw DomainError("need at least one sample");

  DiscrepancyAudit audit;
  audit.all_pass = true;
  Rng rng(seed);
  std::array<std::vector<std::uint8_t>, 3> member;
  for (int a = 0; a < 3; ++a) member[a].assign(g.dims[a], 0);

  auto evaluate = [&](const std::array<std::vector<int>, 3>& subsets) {
    DiscrepancySample s;
    for (int a = 0; a < 3; ++a) {
      s.sizes[a] = static_cast<int>(subsets[a].size());
      for (int idx : subsets[a]) member[a][idx] = 1;
    }
    std::size_t inside = 0;
    for (const auto& e : g.edges)
      if (member[0][e[0]] && member[1][e[1]] && member[2][e[2]]) ++inside;
    for (int a = 0; a < 3; ++a)
      for (int idx : subsets[a]) member[a][idx] = 0;

    s.edges_inside = inside;
    s.expected = p * static_cast<double>(s.sizes[0]) * s.sizes[1] * s.sizes[2];
    const double e_count = static_cast<double>(inside);
    s.check1 = e_count <= xi1 * s.expected;
    if (e_count <= s.expected) {
      s.check2 = true;  // log factor nonpositive, bound vacuous
    } else {
      double lhs = e_count * std::log(e_count / s.expected);
      double rhs = 0.0;
      for (int a = 0; a < 3; ++a) {
        double na = static_cast<double>(g.dims[a]);
        double sa = static_cast<double>(s.sizes[a]);
        rhs = std::max(rhs, sa * std::log(std::exp(1.0) * na / sa));
      }
      s.check2 = lhs <= xi2 * rhs;
    }
    s.pass = s.check1 || s.check2;
    audit.all_pass = audit.all_pass && s.pass;
    audit.samples.push_back(s);
  };

  if (sampler == SubsetSampler::random) {
    while (static_cast<int>(audit.samples.size()) < samples) {
      std::array<std::vector<int>, 3> subsets;
      for (int a = 0; a < 3; ++a) {
        int size = 1 + static_cast<int>(uniform_below(
                           rng, static_cast<std::uint64_t>(g.dims[a])));
        subsets[a] = random_subset(g.dims[a], size, rng);
      }
      evaluate(subsets);
    }
  } else {
    while (static_cast<int>(audit.samples.size()) < samples) {
      std::array<std::vector<std::vector<int>>, 3> bands;
      for (int a = 0; a < 3; ++a) bands[a] = magnitude_bands(g.dims[a], rng);
      bool full = false;
      for (const auto& b1 : bands[0]) {
        for (const auto& b2 : bands[1]) {
          for (const auto& b3 : bands[2]) {
            if (static_cast<int>(audit.samples.size()) >= samples) {
              full = true;
              break;
            }
            if (b1.empty() || b2.empty() || b3.empty()) {
              ++audit.skipped_draws;
              continue;
            }
            evaluate({b1, b2, b3});
          }
          if (full) break;
        }
        if (full) break;
      }
    }
  }
  return audit;
}

double centered_norm_ratio(const FactorModel& truth,
                           const SparseSymmetricTensor& omega, double p,
                           int restarts, int iters, std::uint64_t seed) {
  truth.validate();
  if (truth.n != omega.dim())
    throw ShapeError("model and sample dimensions differ");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  if (restarts < 1 || iters < 1)
    throw DomainError("restarts and iters must be positive");
  double t_max = max_abs_entry(truth);
  if (t_max <= 0.0) throw ScaleError("reference tensor is identically zero");
  CenteredTensorView view{&omega, &truth, p};
  double estimate = power_method_max(view, restarts, iters, seed);
  return estimate /
         (t_max * std::pow(static_cast<double>(truth.n), 1.5) * p);
}

}  // namespace tenscomp
