#include "tenscomp/factor_model.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "tenscomp/rng.hpp"

namespace tenscomp {

void FactorModel::validate(double unit_tol, double orth_tol) const {
  if (n <= 0 || r <= 0) throw ShapeError("factor model needs n > 0, r > 0");
  if (r > n) throw ShapeError("rank exceeds dimension");
  if (sigmas.size() != r || vectors.rows() != n || vectors.cols() != r)
    throw ShapeError("factor model array shapes inconsistent with (n, r)");
  for (int l = 0; l < r; ++l) {
    if (!std::isfinite(sigmas[l])) throw DomainError("non-finite weight");
    if (std::abs(vectors.col(l).norm() - 1.0) > unit_tol)
      throw DomainError("factor column " + std::to_string(l) + " not unit");
  }
  if (orthogonal) {
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        if (std::abs(vectors.col(a).dot(vectors.col(b))) > orth_tol)
          throw DomainError("columns flagged orthogonal but are not");
  }
}

double eval_entry(const FactorModel& m, int i, int j, int k) {
  auto check = [&](int idx) {
    if (idx < 0 || idx >= m.n)
      throw BoundsError("entry index " + std::to_string(idx) + " outside [0, " +
                        std::to_string(m.n) + ")");
  };
  check(i);
  check(j);
  check(k);
  // canonical index order keeps the value bit-identical across permutations
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  double acc = 0.0;
  for (int l = 0; l < m.r; ++l)
    acc += m.sigmas[l] * m.vectors(i, l) * m.vectors(j, l) * m.vectors(k, l);
  return acc;
}

double apply_trilinear(const FactorModel& m, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  if (x.size() != m.n || y.size() != m.n || z.size() != m.n)
    throw ShapeError("trilinear vector length mismatch");
  double acc = 0.0;
  for (int l = 0; l < m.r; ++l)
    acc += m.sigmas[l] * m.vectors.col(l).dot(x) * m.vectors.col(l).dot(y) *
           m.vectors.col(l).dot(z);
  return acc;
}

double apply_trilinear(const SparseSymmetricTensor& t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  return t.trilinear(x, y, z);
}

Eigen::VectorXd contract_mode1(const FactorModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.n) throw ShapeError("contraction vector length mismatch");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.n);
  for (int l = 0; l < m.r; ++l) {
    double d = m.vectors.col(l).dot(x);
    v += (m.sigmas[l] * d * d) * m.vectors.col(l);
  }
  return v;
}

double incoherence(const FactorModel& m) {
  if (m.n <= 0) throw ShapeError("empty model");
  return std::sqrt(static_cast<double>(m.n)) *
         m.vectors.cwiseAbs().maxCoeff();
}

double frobenius_norm(const FactorModel& m) {
  if (m.orthogonal) return m.sigmas.norm();
  double acc = 0.0;
  for (int a = 0; a < m.r; ++a)
    for (int b = 0; b < m.r; ++b) {
      double d = m.vectors.col(a).dot(m.vectors.col(b));
      acc += m.sigmas[a] * m.sigmas[b] * d * d * d;
    }
  if (acc < 0.0) acc = 0.0;  // roundoff of near-zero norms
  return std::sqrt(acc);
}

double max_abs_entry(const FactorModel& m, bool* exact) {
  constexpr int kExactLimit = 400;
  if (exact) *exact = true;
  double best = 0.0;
  if (m.n <= kExactLimit) {
    for (int i = 0; i < m.n; ++i)
      for (int j = i; j < m.n; ++j)
        for (int k = j; k < m.n; ++k)
          best = std::max(best, std::abs(eval_entry(m, i, j, k)));
    return best;
  }
  // Per-axis maxima of the rank-r form are unsound; fall back to scanning
  // triples over the coordinates that dominate each component.
  if (exact) *exact = false;
  constexpr int kTop = 48;
  std::vector<int> cand;
  for (int l = 0; l < m.r; ++l) {
    std::vector<int> order(m.n);
    for (int i = 0; i < m.n; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + kTop, order.end(),
                      [&](int a, int b) {
                        return std::abs(m.vectors(a, l)) >
                               std::abs(m.vectors(b, l));
                      });
    cand.insert(cand.end(), order.begin(), order.begin() + kTop);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a; b < cand.size(); ++b)
      for (std::size_t c = b; c < cand.size(); ++c)
        best = std::max(best,
                        std::abs(eval_entry(m, cand[a], cand[b], cand[c])));
  return best;
}

namespace {

Eigen::MatrixXd random_orthonormal(int n, int r, Rng& rng) {
  Eigen::MatrixXd g(n, r);
  for (int l = 0; l < r; ++l) g.col(l) = gaussian_vector(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  Eigen::MatrixXd rm = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int l = 0; l < r; ++l)
    if (rm(l, l) < 0) q.col(l) = -q.col(l);
  return q;
}

void check_gen_args(int n, int r, const std::vector<double>& sigmas) {
  if (n <= 0) throw ShapeError("n must be positive");
  if (r <= 0 || r > n) throw ShapeError("rank must satisfy 1 <= r <= n");
  if (static_cast<int>(sigmas.size()) != r)
    throw ShapeError("weight count does not match rank");
}

}  // namespace

FactorModel generate_orthogonal_model(int n, int r,
                                      const std::vector<double>& sigmas,
                                      std::uint64_t seed) {
  check_gen_args(n, r, sigmas);
  Rng rng(seed);
  FactorModel m;
  m.n = n;
  m.r = r;
  m.sigmas = Eigen::Map<const Eigen::VectorXd>(sigmas.data(), r);
  m.vectors = random_orthonormal(n, r, rng);
  m.orthogonal = true;
  return m;
}

double max_pairwise_dot(const FactorModel& m) {
  double worst = -1.0;
  for (int a = 0; a < m.r; ++a)
    for (int b = a + 1; b < m.r; ++b)
      worst = std::max(worst, m.vectors.col(a).dot(m.vectors.col(b)));
  return worst;
}

FactorModel generate_correlated_model(int n, int r, double rho_target,
                                      const std::vector<double>& sigmas,
                                      std::uint64_t seed) {
  check_gen_args(n, r, sigmas);
  if (rho_target < 0.0 || rho_target >= 1.0)
    throw DomainError("rho_target must lie in [0, 1)");
  if (rho_target == 0.0) return generate_orthogonal_model(n, r, sigmas, seed);
  if (r < 2) throw ShapeError("correlated model needs r >= 2");

  Rng rng(seed);
  Eigen::MatrixXd q = random_orthonormal(n, r, rng);
  Eigen::VectorXd w = random_unit_vector(n, rng);

  FactorModel m;
  m.n = n;
  m.r = r;
  m.sigmas = Eigen::Map<const Eigen::VectorXd>(sigmas.data(), r);
  m.orthogonal = false;

  auto blend = [&](double beta) {
    Eigen::MatrixXd v(n, r);
    for (int l = 0; l < r; ++l) {
      Eigen::VectorXd u = (1.0 - beta) * q.col(l) + beta * w;
      double norm = u.norm();
      if (norm == 0.0) throw DegenerateError("blend collapsed a column");
      v.col(l) = u / norm;
    }
    return v;
  };

  constexpr double kTol = 0.005;
  constexpr int kMaxSteps = 50;
  double lo = 0.0, hi = 1.0;
  for (int step = 0; step < kMaxSteps; ++step) {
    double beta = 0.5 * (lo + hi);
    m.vectors = blend(beta);
    double rho = max_pairwise_dot(m);
    if (std::abs(rho - rho_target) <= kTol) return m;
    if (rho < rho_target)
      lo = beta;
    else
      hi = beta;
  }
  throw ConvergenceError("blend bisection failed to reach target correlation");
}

}  // namespace tenscomp
