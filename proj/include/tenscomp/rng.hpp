#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace tenscomp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed derivation rule used everywhere a master seed spawns substreams:
// stream k gets splitmix64(master ^ splitmix64(k + 1)).  Substreams are
// independent of how many of them a run consumes, which keeps per-trial
// results identical across thread counts and restart budgets.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

// 53-bit uniform in [0, 1); one engine draw per call, so sampling streams
// advance by a fixed amount regardless of the outcome.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased draw from [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

inline Eigen::VectorXd gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline Eigen::VectorXd random_unit_vector(int n, Rng& rng) {
  Eigen::VectorXd v = gaussian_vector(n, rng);
  double norm = v.norm();
  while (norm == 0.0) {
    v = gaussian_vector(n, rng);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace tenscomp
