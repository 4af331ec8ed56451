#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tenscomp/errors.hpp"

namespace tenscomp {

// Index triple, canonical when i <= j <= k.
struct Triple {
  int i = 0, j = 0, k = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

Triple canonical_triple(int i, int j, int k);

inline std::uint64_t pack_triple(int i, int j, int k) {
  return (static_cast<std::uint64_t>(i) << 42) |
         (static_cast<std::uint64_t>(j) << 21) | static_cast<std::uint64_t>(k);
}

struct TensorEntry {
  int i = 0, j = 0, k = 0;
  double value = 0.0;
};

// Batch of power-iteration iterates: one column per trial, rows contiguous so
// a single sweep over the stored triples updates every trial.
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Sparse symmetric 3-mode tensor.  One entry is stored per canonical triple
// i <= j <= k; every index permutation of a stored triple reads back the same
// value.  Immutable after construction, so shared reads are safe.
class SparseSymmetricTensor {
 public:
  SparseSymmetricTensor() = default;
  // Entries may arrive with indices in any per-triple order; they are
  // canonicalized.  Duplicate canonical triples or out-of-range indices throw.
  SparseSymmetricTensor(int n, std::vector<TensorEntry> entries);

  int dim() const { return n_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Canonical entries sorted lexicographically.
  const std::vector<TensorEntry>& entries() const { return entries_; }

  bool contains(int i, int j, int k) const;
  // Stored value under symmetry, 0.0 for unobserved triples.
  double value(int i, int j, int k) const;

  // Number of distinct permutations of a triple (1, 3, or 6).
  static int orbit_size(int i, int j, int k);

  // All distinct permutations of every stored triple.
  const std::vector<TensorEntry>& closure() const { return closure_; }

  // v[i] = sum over the closure of value * u[j] * u[k].
  Eigen::VectorXd contract_mode1(const Eigen::VectorXd& u) const;
  // Same contraction applied to every column of a batch at once.
  RowMajorMatrix contract_mode1_multi(const RowMajorMatrix& u) const;

  // sum over the closure of value * x[i] * y[j] * z[k].
  double trilinear(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& z) const;

  // sqrt(sum of orbit_size * value^2): Frobenius norm of the observed part.
  double observed_frobenius_norm() const;

 private:
  void check_index(int idx) const;

  int n_ = 0;
  std::vector<TensorEntry> entries_;
  std::vector<TensorEntry> closure_;
  std::unordered_map<std::uint64_t, double> values_;
};

}  // namespace tenscomp
