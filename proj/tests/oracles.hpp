#pragma once

// Brute-force reference implementations the tests compare against.  These
// deliberately take the slow dense route (full n^3 arrays, triple loops) so
// they share no code with the library's sparse and Gram-identity paths.

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tenscomp/factor_model.hpp"
#include "tenscomp/tensor.hpp"

namespace oracle {

struct DenseTensor {
  int n = 0;
  std::vector<double> a;  // n^3 values, index (i*n + j)*n + k

  explicit DenseTensor(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_ * n_, 0.0) {}
  double& at(int i, int j, int k) {
    return a[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
  double at(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
};

// Accumulates one rank-one slab at a time over all n^3 cells.
inline DenseTensor densify(const tenscomp::FactorModel& m) {
  DenseTensor t(m.n);
  for (int l = 0; l < m.r; ++l)
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j)
        for (int k = 0; k < m.n; ++k)
          t.at(i, j, k) +=
              m.sigmas[l] * m.vectors(i, l) * m.vectors(j, l) * m.vectors(k, l);
  return t;
}

inline DenseTensor densify(const tenscomp::SparseSymmetricTensor& s) {
  DenseTensor t(s.dim());
  for (const tenscomp::TensorEntry& e : s.closure()) t.at(e.i, e.j, e.k) = e.value;
  return t;
}

// 0/1 mask of the symmetry closure of a sparse support.
inline std::vector<std::uint8_t> closure_mask(
    const tenscomp::SparseSymmetricTensor& s) {
  const int n = s.dim();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n * n, 0);
  for (const tenscomp::TensorEntry& e : s.closure())
    mask[(static_cast<std::size_t>(e.i) * n + e.j) * n + e.k] = 1;
  return mask;
}

inline double trilinear(const DenseTensor& t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  double acc = 0.0;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      for (int k = 0; k < t.n; ++k) acc += t.at(i, j, k) * x[i] * y[j] * z[k];
  return acc;
}

inline Eigen::VectorXd contract_mode1(const DenseTensor& t,
                                      const Eigen::VectorXd& u) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(t.n);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      for (int k = 0; k < t.n; ++k) v[i] += t.at(i, j, k) * u[j] * u[k];
  return v;
}

inline double frobenius(const DenseTensor& t) {
  double acc = 0.0;
  for (double v : t.a) acc += v * v;
  return std::sqrt(acc);
}

inline double masked_frobenius(const DenseTensor& t,
                               const std::vector<std::uint8_t>& mask) {
  double acc = 0.0;
  for (std::size_t idx = 0; idx < t.a.size(); ++idx)
    if (mask[idx]) acc += t.a[idx] * t.a[idx];
  return std::sqrt(acc);
}

inline DenseTensor difference(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor d(a.n);
  for (std::size_t idx = 0; idx < a.a.size(); ++idx) d.a[idx] = a.a[idx] - b.a[idx];
  return d;
}

// Exhaustive spherical grid search for max |T[x,x,x]| at n = 3.
inline double grid_opnorm3(const DenseTensor& t, int steps) {
  const double pi = std::acos(-1.0);
  double best = 0.0;
  Eigen::VectorXd x(3);
  for (int a = 0; a <= steps; ++a) {
    double theta = pi * a / steps;
    for (int b = 0; b < 2 * steps; ++b) {
      double phi = pi * b / steps;
      x[0] = std::sin(theta) * std::cos(phi);
      x[1] = std::sin(theta) * std::sin(phi);
      x[2] = std::cos(theta);
      best = std::max(best, std::abs(trilinear(t, x, x, x)));
    }
  }
  return best;
}

// Per-coordinate normal-equations solve of the one-component least squares
// over a dense 0/1 observation mask: coordinate i of the solution minimizes
// sum over observed (i,j,k) of (R_ijk - v * u_q(j) u_q(k))^2.
inline Eigen::VectorXd normal_equations_update(
    const DenseTensor& observed, const std::vector<std::uint8_t>& mask,
    const tenscomp::FactorModel& m, int q, double min_denominator) {
  const int n = observed.n;
  DenseTensor resid = observed;
  for (int l = 0; l < m.r; ++l) {
    if (l == q) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          resid.at(i, j, k) -= m.sigmas[l] * m.vectors(i, l) * m.vectors(j, l) *
                               m.vectors(k, l);
  }
  Eigen::VectorXd sol = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!mask[(static_cast<std::size_t>(i) * n + j) * n + k]) continue;
        double w = m.vectors(j, q) * m.vectors(k, q);
        num += w * resid.at(i, j, k);
        den += w * w;
      }
    if (den >= min_denominator) sol[i] = num / den;
  }
  return sol;
}

}  // namespace oracle
