#include "tenscomp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

namespace tenscomp {

Triple canonical_triple(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  return {i, j, k};
}

void SparseSymmetricTensor::check_index(int idx) const {
  if (idx < 0 || idx >= n_)
    throw BoundsError("tensor index " + std::to_string(idx) +
                      " outside [0, " + std::to_string(n_) + ")");
}

SparseSymmetricTensor::SparseSymmetricTensor(int n,
                                             std::vector<TensorEntry> entries)
    : n_(n) {
  if (n <= 0) throw ShapeError("tensor dimension must be positive");
  if (n >= (1 << 21)) throw ScaleError("tensor dimension exceeds index packing");
  entries_.reserve(entries.size());
  for (const TensorEntry& e : entries) {
    check_index(e.i);
    check_index(e.j);
    check_index(e.k);
    Triple t = canonical_triple(e.i, e.j, e.k);
    entries_.push_back({t.i, t.j, t.k, e.value});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const TensorEntry& a, const TensorEntry& b) {
              return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
            });
  values_.reserve(entries_.size() * 2);
  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    const TensorEntry& e = entries_[idx];
    if (idx > 0) {
      const TensorEntry& prev = entries_[idx - 1];
      if (prev.i == e.i && prev.j == e.j && prev.k == e.k)
        throw DomainError("duplicate canonical triple (" + std::to_string(e.i) +
                          "," + std::to_string(e.j) + "," + std::to_string(e.k) +
                          ")");
    }
    values_.emplace(pack_triple(e.i, e.j, e.k), e.value);
  }
  closure_.reserve(entries_.size() * 6);
  for (const TensorEntry& e : entries_) {
    const int i = e.i, j = e.j, k = e.k;
    const double v = e.value;
    closure_.push_back({i, j, k, v});
    if (i == j && j == k) continue;
    if (i == j) {  // i == j < k
      closure_.push_back({i, k, j, v});
      closure_.push_back({k, i, j, v});
    } else if (j == k) {  // i < j == k
      closure_.push_back({j, i, k, v});
      closure_.push_back({j, k, i, v});
    } else {
      closure_.push_back({i, k, j, v});
      closure_.push_back({j, i, k, v});
      closure_.push_back({j, k, i, v});
      closure_.push_back({k, i, j, v});
      closure_.push_back({k, j, i, v});
    }
  }
}

bool SparseSymmetricTensor::contains(int i, int j, int k) const {
  check_index(i);
  check_index(j);
  check_index(k);
  Triple t = canonical_triple(i, j, k);
  return values_.count(pack_triple(t.i, t.j, t.k)) != 0;
}

double SparseSymmetricTensor::value(int i, int j, int k) const {
  check_index(i);
  check_index(j);
  check_index(k);
  Triple t = canonical_triple(i, j, k);
  auto it = values_.find(pack_triple(t.i, t.j, t.k));
  return it == values_.end() ? 0.0 : it->second;
}

int SparseSymmetricTensor::orbit_size(int i, int j, int k) {
  if (i == j && j == k) return 1;
  if (i == j || j == k || i == k) return 3;
  return 6;
}

Eigen::VectorXd SparseSymmetricTensor::contract_mode1(
    const Eigen::VectorXd& u) const {
  if (u.size() != n_) throw ShapeError("contraction vector length mismatch");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
  for (const TensorEntry& e : closure_) v[e.i] += e.value * u[e.j] * u[e.k];
  return v;
}

RowMajorMatrix SparseSymmetricTensor::contract_mode1_multi(
    const RowMajorMatrix& u) const {
  if (u.rows() != n_) throw ShapeError("contraction batch row count mismatch");
  RowMajorMatrix v = RowMajorMatrix::Zero(n_, u.cols());
  for (const TensorEntry& e : closure_)
    v.row(e.i) += e.value * u.row(e.j).cwiseProduct(u.row(e.k));
  return v;
}

double SparseSymmetricTensor::trilinear(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& z) const {
  if (x.size() != n_ || y.size() != n_ || z.size() != n_)
    throw ShapeError("trilinear vector length mismatch");
  double acc = 0.0;
  for (const TensorEntry& e : closure_) acc += e.value * x[e.i] * y[e.j] * z[e.k];
  return acc;
}

double SparseSymmetricTensor::observed_frobenius_norm() const {
  double acc = 0.0;
  for (const TensorEntry& e : entries_)
    acc += orbit_size(e.i, e.j, e.k) * e.value * e.value;
  return std::sqrt(acc);
}

}  // namespace tenscomp
