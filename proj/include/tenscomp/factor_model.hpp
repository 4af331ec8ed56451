#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "tenscomp/errors.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// Rank-r symmetric CP factorization: entry (i,j,k) of the represented tensor
// is sum_l sigmas[l] * vectors(i,l) * vectors(j,l) * vectors(k,l).
// Columns of `vectors` are unit length; `orthogonal` marks mutually
// orthogonal columns (generators set it, estimates usually clear it).
struct FactorModel {
  int n = 0;
  int r = 0;
  Eigen::VectorXd sigmas;   // length r
  Eigen::MatrixXd vectors;  // n x r, unit columns
  bool orthogonal = false;

  // Throws ShapeError / DomainError when the invariants above fail.
  void validate(double unit_tol = 1e-12, double orth_tol = 1e-10) const;
};

double eval_entry(const FactorModel& m, int i, int j, int k);

// sum_l sigmas[l] <u_l,x> <u_l,y> <u_l,z>.
double apply_trilinear(const FactorModel& m, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z);
double apply_trilinear(const SparseSymmetricTensor& t, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& z);

// v[i] = sum_l sigmas[l] <u_l,x>^2 vectors(i,l).
Eigen::VectorXd contract_mode1(const FactorModel& m, const Eigen::VectorXd& x);

// sqrt(n) * max_{i,l} |vectors(i,l)|.
double incoherence(const FactorModel& m);

// Exact Frobenius norm without materializing the tensor: sqrt(sum sigmas^2)
// for orthogonal models, otherwise via the Gram identity
// ||T||_F^2 = sum_{l,m} sigma_l sigma_m <u_l,u_m>^3.
double frobenius_norm(const FactorModel& m);

// max_{i<=j<=k} |T_ijk| by exact scan of canonical triples.  Exact up to
// n = 400; beyond that only the triples drawn from each component's largest
// coordinates are scanned and `exact` (when given) is set false.
double max_abs_entry(const FactorModel& m, bool* exact = nullptr);

// Random model with orthonormal columns (Gaussian matrix, QR), unit sigmas
// given by `sigmas`.  Deterministic in `seed`.
FactorModel generate_orthogonal_model(int n, int r,
                                      const std::vector<double>& sigmas,
                                      std::uint64_t seed);

// Model whose worst pairwise inner product max_{l != m} <u_l,u_m> lands
// within 0.01 of rho_target, built by blending an orthogonal frame with one
// shared random unit direction and bisecting the blend weight.
FactorModel generate_correlated_model(int n, int r, double rho_target,
                                      const std::vector<double>& sigmas,
                                      std::uint64_t seed);

// Worst pairwise (signed) inner product between distinct columns.
double max_pairwise_dot(const FactorModel& m);

}  // namespace tenscomp
