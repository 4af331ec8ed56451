#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tenscomp/factor_model.hpp"
#include "tenscomp/metrics.hpp"
#include "tenscomp/rng.hpp"
#include "tenscomp/rtpm.hpp"
#include "tenscomp/sampling.hpp"
#include "tenscomp/tensor.hpp"

using namespace tenscomp;

namespace {

SparseSymmetricTensor fully_observed(const FactorModel& m) {
  return sample_bernoulli(m, 1.0, 1);
}

// Max over components of the aligned vector error.
double max_aligned_error(const FactorModel& est, const FactorModel& truth) {
  AlignmentReport rep = align_factors(est, truth);
  return *std::max_element(rep.vector_error.begin(), rep.vector_error.end());
}

Eigen::VectorXd unit_at_distance(const Eigen::VectorXd& u, double dist,
                                 Rng& rng) {
  Eigen::VectorXd g = gaussian_vector(static_cast<int>(u.size()), rng);
  Eigen::VectorXd w = g - g.dot(u) * u;
  w /= w.norm();
  double theta = 2.0 * std::asin(dist / 2.0);
  return std::cos(theta) * u + std::sin(theta) * w;
}

}  // namespace

TEST_CASE("power step fixes the dominant component of a rank-1 tensor") {
  FactorModel truth = generate_orthogonal_model(10, 1, {2.5}, 3);
  SparseSymmetricTensor t = fully_observed(truth);
  Eigen::VectorXd u = truth.vectors.col(0);
  Eigen::VectorXd next = power_step(t, u, 1.0);
  CHECK((next - u).norm() < 1e-12);
}

TEST_CASE("power step fixes the minor component too") {
  FactorModel truth = generate_orthogonal_model(10, 2, {3.0, 1.0}, 5);
  SparseSymmetricTensor t = fully_observed(truth);
  Eigen::VectorXd u2 = truth.vectors.col(1);
  Eigen::VectorXd next = power_step(t, u2, 1.0);
  CHECK((next - u2).norm() < 1e-10);
}

TEST_CASE("power step equals the dense contraction oracle") {
  Rng rng(7);
  FactorModel truth = generate_orthogonal_model(8, 2, {2.0, 1.0}, 9);
  SparseSymmetricTensor t = sample_bernoulli(truth, 0.5, 11);
  REQUIRE(t.nnz() > 0);
  oracle::DenseTensor dense = oracle::densify(t);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd u = random_unit_vector(8, rng);
    Eigen::VectorXd got = power_step(t, u, 2.0);
    Eigen::VectorXd image = 2.0 * oracle::contract_mode1(dense, u);
    REQUIRE(image.norm() > 0.0);
    image /= image.norm();
    CHECK((got - image).norm() < 1e-12);
    CHECK(std::abs(got.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("power step reports a degenerate direction") {
  SparseSymmetricTensor t(6, {{0, 1, 2, 1.0}});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(6);
  u[5] = 1.0;
  CHECK_THROWS_AS(power_step(t, u, 1.0), DegenerateError);
}

TEST_CASE("extraction recovers a fully observed orthogonal pair") {
  FactorModel truth = generate_orthogonal_model(12, 2, {3.0, 1.0}, 13);
  SparseSymmetricTensor t = fully_observed(truth);
  RtpmConfig cfg;
  cfg.rank = 2;
  cfg.trials_per_component = 12;
  cfg.iters_per_trial = 80;
  cfg.rescale = 1.0;
  cfg.seed = 17;
  FactorModel est = rtpm_extract(t, cfg);
  AlignmentReport rep = align_factors(est, truth);
  for (int l = 0; l < 2; ++l) {
    double dot = std::abs(
        est.vectors.col(l).dot(truth.vectors.col(rep.permutation[l])));
    CHECK(dot >= 1.0 - 1e-8);
    CHECK(std::abs(std::abs(est.sigmas[l]) -
                   truth.sigmas[rep.permutation[l]]) < 1e-6);
  }
}

TEST_CASE("extraction error shrinks as the sampling rate grows") {
  const int n = 50;
  const int r = 3;
  const int seeds = 20;
  const std::vector<double> alphas{10, 20, 40, 80};
  std::vector<double> medians;
  for (double alpha : alphas) {
    double p = alpha * std::log(static_cast<double>(n)) / std::pow(n, 1.5);
    std::vector<double> errs;
    for (int s = 0; s < seeds; ++s) {
      std::uint64_t seed = derive_seed(2024, static_cast<std::uint64_t>(
                                                 alpha * 1000 + s));
      FactorModel truth = generate_orthogonal_model(n, r, {1, 1, 1}, seed);
      SparseSymmetricTensor omega =
          sample_bernoulli(truth, p, derive_seed(seed, 1));
      RtpmConfig cfg;
      cfg.rank = r;
      cfg.trials_per_component = 12;
      cfg.iters_per_trial = 15;
      cfg.rescale = 1.0 / p;
      cfg.seed = derive_seed(seed, 2);
      FactorModel est = rtpm_extract(omega, cfg);
      errs.push_back(max_aligned_error(est, truth));
    }
    std::sort(errs.begin(), errs.end());
    medians.push_back(0.5 * (errs[seeds / 2 - 1] + errs[seeds / 2]));
  }
  MESSAGE("median max init error by alpha {10,20,40,80}: ", medians[0], " ",
          medians[1], " ", medians[2], " ", medians[3]);
  for (std::size_t a = 1; a < medians.size(); ++a)
    CHECK(medians[a] < medians[a - 1]);
}

TEST_CASE("extraction fails loudly on an empty sample") {
  SparseSymmetricTensor empty(10, {});
  RtpmConfig cfg;
  cfg.rank = 1;
  cfg.trials_per_component = 4;
  cfg.iters_per_trial = 5;
  cfg.seed = 1;
  CHECK_THROWS_AS(rtpm_extract(empty, cfg), DegenerateError);
}

TEST_CASE("extraction validates its budget") {
  SparseSymmetricTensor t(4, {{0, 1, 2, 1.0}});
  RtpmConfig cfg;
  cfg.rank = 1;
  cfg.trials_per_component = 0;
  cfg.iters_per_trial = 5;
  CHECK_THROWS_AS(rtpm_extract(t, cfg), DomainError);
  cfg.trials_per_component = 4;
  cfg.iters_per_trial = 0;
  CHECK_THROWS_AS(rtpm_extract(t, cfg), DomainError);
  cfg.iters_per_trial = 5;
  cfg.rescale = 0.0;
  CHECK_THROWS_AS(rtpm_extract(t, cfg), DomainError);
}

TEST_CASE("extraction is a pure function of tensor and config") {
  FactorModel truth = generate_orthogonal_model(15, 2, {2.0, 1.0}, 19);
  SparseSymmetricTensor omega = sample_bernoulli(truth, 0.5, 23);
  RtpmConfig cfg;
  cfg.rank = 2;
  cfg.trials_per_component = 6;
  cfg.iters_per_trial = 20;
  cfg.rescale = 2.0;
  cfg.seed = 29;
  FactorModel a = rtpm_extract(omega, cfg);
  FactorModel b = rtpm_extract(omega, cfg);
  CHECK((a.vectors - b.vectors).norm() == 0.0);
  CHECK((a.sigmas - b.sigmas).norm() == 0.0);
}

TEST_CASE("default budgets follow the configured growth law") {
  RtpmConfig cfg = RtpmConfig::defaults(50, 3, 0.2, 7);
  double l_exact = std::pow(3.0 * std::log(50.0), 2.0);
  CHECK(cfg.trials_per_component == static_cast<int>(std::ceil(l_exact)));
  CHECK(cfg.iters_per_trial >= 10);
  CHECK(cfg.rescale == doctest::Approx(5.0));
  RtpmConfig tiny = RtpmConfig::defaults(5, 1, 1.0, 7);
  CHECK(tiny.trials_per_component >= 8);
  CHECK(tiny.iters_per_trial >= 10);
}

TEST_CASE("rayleigh value is non-decreasing along polish steps") {
  FactorModel truth = generate_orthogonal_model(12, 3, {3.0, 2.0, 1.0}, 31);
  SparseSymmetricTensor t = fully_observed(truth);
  Rng rng(33);
  for (int start = 0; start < 5; ++start) {
    Eigen::VectorXd u = random_unit_vector(12, rng);
    double prev = std::abs(t.trilinear(u, u, u));
    for (int step = 0; step < 40; ++step) {
      u = power_step(t, u, 1.0);
      double lam = std::abs(t.trilinear(u, u, u));
      CHECK(lam >= prev - 1e-12);
      prev = lam;
    }
  }
}

TEST_CASE("clipping leaves conforming models untouched") {
  FactorModel m = generate_orthogonal_model(30, 2, {2.0, 1.0}, 37);
  double mu = incoherence(m) + 0.01;
  FactorModel clipped = clip_to_incoherent(m, mu);
  CHECK((clipped.vectors - m.vectors).norm() == 0.0);
  CHECK((clipped.sigmas - m.sigmas).norm() == 0.0);
  CHECK(clipped.orthogonal == m.orthogonal);
  CHECK_THROWS_AS(clip_to_incoherent(m, 0.0), DomainError);
}

TEST_CASE("clipping a basis vector renormalizes back to itself") {
  FactorModel m;
  m.n = 4;
  m.r = 1;
  m.sigmas = Eigen::VectorXd::Constant(1, 1.0);
  m.vectors = Eigen::MatrixXd::Zero(4, 1);
  m.vectors(0, 0) = 1.0;
  m.orthogonal = true;
  FactorModel clipped = clip_to_incoherent(m, 1.0);
  CHECK(clipped.vectors(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(clipped.vectors.col(0).norm() - 1.0) < 1e-12);
  CHECK(clipped.sigmas[0] == 1.0);
}

TEST_CASE("clipping keeps perturbed estimates near an incoherent truth") {
  const int n = 50;
  const double alpha = 0.05;
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    FactorModel truth =
        generate_orthogonal_model(n, 3, {1, 1, 1}, 4000 + trial);
    double mu = incoherence(truth);
    FactorModel est = truth;
    est.orthogonal = false;
    for (int q = 0; q < 3; ++q)
      est.vectors.col(q) = unit_at_distance(truth.vectors.col(q), alpha, rng);
    FactorModel clipped = clip_to_incoherent(est, mu);
    CHECK(incoherence(clipped) <= 2.0 * mu);
    for (int q = 0; q < 3; ++q) {
      double dist = (clipped.vectors.col(q) - truth.vectors.col(q)).norm();
      CHECK(dist <= 3.0 * alpha);
      CHECK(std::abs(clipped.vectors.col(q).norm() - 1.0) < 1e-12);
      double cap = mu / ((1.0 - alpha) * std::sqrt(static_cast<double>(n)));
      CHECK(clipped.vectors.col(q).cwiseAbs().maxCoeff() <= cap + 1e-12);
    }
  }
}

TEST_CASE("clipping is idempotent") {
  FactorModel truth = generate_orthogonal_model(20, 2, {1.0, 1.0}, 43);
  FactorModel est = truth;
  Rng rng(47);
  est.vectors.col(0) = unit_at_distance(truth.vectors.col(0), 0.2, rng);
  est.orthogonal = false;
  double mu = incoherence(truth);
  FactorModel once = clip_to_incoherent(est, mu);
  // renormalization can push an entry a hair above the cap; a second clip
  // must be a fixed point up to that same hair
  FactorModel twice = clip_to_incoherent(once, mu * (1.0 + 1e-9));
  CHECK((twice.vectors - once.vectors).norm() < 1e-9);
}
