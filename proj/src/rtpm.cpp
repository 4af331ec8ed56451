#include "tenscomp/rtpm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tenscomp/power_iteration.hpp"
#include "tenscomp/rng.hpp"

namespace tenscomp {

RtpmConfig RtpmConfig::defaults(int n, int rank, double p,
                                std::uint64_t seed) {
  if (n < 2) throw ShapeError("defaults need n >= 2");
  if (rank < 1) throw ShapeError("rank must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
  RtpmConfig cfg;
  cfg.rank = rank;
  double ln_n = std::log(static_cast<double>(n));
  double trials = std::pow(rank * ln_n, 2.0);
  cfg.trials_per_component =
      std::max(8, static_cast<int>(std::ceil(trials)));
  double scale = p * std::pow(static_cast<double>(n), 1.5);
  double inner = std::log(std::max(scale, std::exp(1.0) + 1e-9));
  double steps = 10.0 * (std::log(static_cast<double>(rank)) + std::log(inner));
  cfg.iters_per_trial = std::max(10, static_cast<int>(std::ceil(steps)));
  cfg.rescale = 1.0 / p;
  cfg.seed = seed;
  return cfg;
}

Eigen::VectorXd power_step(const SparseSymmetricTensor& t,
                           const Eigen::VectorXd& u, double rescale) {
  Eigen::VectorXd v = rescale * t.contract_mode1(u);
  double norm = v.norm();
  if (norm <= 0.0) throw DegenerateError("power step image is zero");
  return v / norm;
}

namespace {

struct TrialResult {
  Eigen::VectorXd vector;
  double rayleigh = 0.0;
  int attempt = 0;
  bool alive = false;
};

// Evolves a batch of starts in lockstep through `iters` deflated power steps.
// Trials whose image vanishes are zeroed and reported dead.
void evolve_batch(const SparseSymmetricTensor& t, const RtpmConfig& cfg,
                  const Eigen::MatrixXd& defl_vectors,
                  const Eigen::VectorXd& defl_weights, int defl_count,
                  RowMajorMatrix& x, std::vector<bool>& alive) {
  const int cols = static_cast<int>(x.cols());
  for (int it = 0; it < cfg.iters_per_trial; ++it) {
    RowMajorMatrix y = t.contract_mode1_multi(x);
    if (cfg.rescale != 1.0) y *= cfg.rescale;
    if (defl_count > 0) {
      Eigen::MatrixXd g = defl_vectors.leftCols(defl_count).transpose() * x;
      Eigen::MatrixXd g2 = g.array().square().matrix();
      g2 = defl_weights.head(defl_count).asDiagonal() * g2;
      y -= defl_vectors.leftCols(defl_count) * g2;
    }
    for (int c = 0; c < cols; ++c) {
      if (!alive[c]) continue;
      double norm = y.col(c).norm();
      if (norm <= 0.0) {
        alive[c] = false;
        x.col(c).setZero();
      } else {
        x.col(c) = y.col(c) / norm;
      }
    }
  }
}

double deflated_rayleigh(const SparseSymmetricTensor& t, const RtpmConfig& cfg,
                         const Eigen::MatrixXd& defl_vectors,
                         const Eigen::VectorXd& defl_weights, int defl_count,
                         const Eigen::VectorXd& u) {
  DeflatedTensorView view{&t, cfg.rescale, &defl_vectors, &defl_weights,
                          defl_count};
  return u.dot(view.contract(u));
}

}  // namespace

FactorModel rtpm_extract(const SparseSymmetricTensor& t,
                         const RtpmConfig& cfg) {
  const int n = t.dim();
  if (cfg.rank < 1 || cfg.rank > n)
    throw ShapeError("rank must satisfy 1 <= rank <= n");
  if (cfg.trials_per_component < 1 || cfg.iters_per_trial < 1 ||
      cfg.restart_budget_multiplier < 1)
    throw DomainError("budgets must be positive");
  if (!(cfg.rescale > 0.0) || !std::isfinite(cfg.rescale))
    throw DomainError("rescale must be positive and finite");
  if (t.empty()) throw DegenerateError("initialization failed: empty sample");

  Eigen::MatrixXd defl_vectors(n, cfg.rank);
  Eigen::VectorXd defl_weights(cfg.rank);
  int extracted = 0;

  for (int q = 0; q < cfg.rank; ++q) {
    const std::uint64_t comp_seed =
        derive_seed(cfg.seed, static_cast<std::uint64_t>(q));
    const int budget =
        cfg.trials_per_component * cfg.restart_budget_multiplier;

    std::vector<TrialResult> results;
    results.reserve(cfg.trials_per_component);
    int next_attempt = 0;
    while (static_cast<int>(results.size()) < cfg.trials_per_component &&
           next_attempt < budget) {
      int want = cfg.trials_per_component - static_cast<int>(results.size());
      int batch = std::min(want, budget - next_attempt);
      RowMajorMatrix x(n, batch);
      std::vector<int> attempt_ids(batch);
      for (int c = 0; c < batch; ++c) {
        attempt_ids[c] = next_attempt + c;
        Rng rng(derive_seed(comp_seed,
                            static_cast<std::uint64_t>(attempt_ids[c])));
        x.col(c) = random_unit_vector(n, rng);
      }
      next_attempt += batch;
      std::vector<bool> alive(batch, true);
      evolve_batch(t, cfg, defl_vectors, defl_weights, extracted, x, alive);
      for (int c = 0; c < batch; ++c) {
        if (!alive[c]) continue;
        TrialResult r;
        r.vector = x.col(c);
        r.rayleigh = deflated_rayleigh(t, cfg, defl_vectors, defl_weights,
                                       extracted, r.vector);
        r.attempt = attempt_ids[c];
        r.alive = true;
        results.push_back(std::move(r));
      }
    }
    if (results.empty())
      throw DegenerateError("initialization failed: all trials degenerate");

    const TrialResult* winner = &results.front();
    for (const TrialResult& r : results)
      if (std::abs(r.rayleigh) > std::abs(winner->rayleigh)) winner = &r;

    Eigen::VectorXd u = winner->vector;
    DeflatedTensorView view{&t, cfg.rescale, &defl_vectors, &defl_weights,
                            extracted};
    for (int it = 0; it < cfg.iters_per_trial; ++it) {
      Eigen::VectorXd y = view.contract(u);
      double norm = y.norm();
      if (norm <= 0.0) break;  // keep the last healthy iterate
      u = y / norm;
    }
    double lambda =
        deflated_rayleigh(t, cfg, defl_vectors, defl_weights, extracted, u);
    defl_vectors.col(extracted) = u;
    defl_weights[extracted] = lambda;
    ++extracted;
  }

  std::vector<int> order(extracted);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(defl_weights[a]) > std::abs(defl_weights[b]);
  });

  FactorModel model;
  model.n = n;
  model.r = extracted;
  model.sigmas.resize(extracted);
  model.vectors.resize(n, extracted);
  for (int l = 0; l < extracted; ++l) {
    model.sigmas[l] = defl_weights[order[l]];
    model.vectors.col(l) = defl_vectors.col(order[l]);
  }
  model.orthogonal = false;
  return model;
}

FactorModel clip_to_incoherent(const FactorModel& m, double mu) {
  m.validate();
  if (!(mu > 0.0)) throw DomainError("mu must be positive");
  const double cap = mu / std::sqrt(static_cast<double>(m.n));
  FactorModel out = m;
  bool any_clipped = false;
  for (int l = 0; l < m.r; ++l) {
    bool clipped = false;
    Eigen::VectorXd u = m.vectors.col(l);
    for (int i = 0; i < m.n; ++i) {
      if (std::abs(u[i]) > cap) {
        u[i] = u[i] > 0.0 ? cap : -cap;
        clipped = true;
      }
    }
    if (clipped) {
      double norm = u.norm();
      if (norm <= 0.0) throw DegenerateError("clipping collapsed a column");
      out.vectors.col(l) = u / norm;
      any_clipped = true;
    }
  }
  if (any_clipped) out.orthogonal = false;
  return out;
}

}  // namespace tenscomp
