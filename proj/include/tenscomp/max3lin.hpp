#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tenscomp/altmin.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// One parity constraint x_i * x_j * x_k = rhs over +-1 variables
// (-1 encodes true), with i < j < k, zero-based.
struct Lin3Equation {
  int i = 0, j = 0, k = 0;
  int rhs = 1;
};

struct Lin3Instance {
  int n = 0;
  std::vector<Lin3Equation> equations;
  std::optional<std::vector<int>> planted;  // +-1 assignment, if known

  void validate() const;
  int satisfied_count(const std::vector<int>& assignment) const;
};

// Plants a uniform +-1 assignment and keeps each strictly increasing triple
// with probability p, right-hand sides read off the planted assignment.
Lin3Instance generate_planted(int n, double p, std::uint64_t seed);

struct Max3linOptions {
  double p = 0.0;   // effective triple rate; 0 means estimate from m
  double mu = 1.0;  // incoherence cap applied after initialization
  int tau = 30;
  SampleMode sample_mode = SampleMode::reuse;
  int rtpm_trials = 0;  // 0 keeps the theory default
  int rtpm_iters = 0;
  std::uint64_t seed = 0;
};

struct Max3linResult {
  std::vector<int> assignment;
  int satisfied = 0;
  int total = 0;
  bool success = false;  // every equation satisfied
};

// Treats the instance as a rank-one symmetric tensor observed on the
// equation triples, recovers the factor by power-method initialization plus
// alternating least squares, rounds signs (ties to +1), and fixes the global
// sign by equation-count majority.  Solver collapse is reported as failure,
// not thrown.
Max3linResult solve_as_completion(const Lin3Instance& inst,
                                  const Max3linOptions& opts);

// All satisfying +-1 assignments by exhaustive enumeration; n is capped at 24.
std::vector<std::vector<int>> brute_force_solutions(const Lin3Instance& inst);

struct PropagationResult {
  enum class Status { connected, disconnected, indeterminate };
  Status status = Status::disconnected;
  // When connected: equation triples in an order where each one shares
  // exactly two variables with the union of its predecessors and the chain
  // reaches every variable.
  std::vector<std::array<int, 3>> sequence;
};

// Searches for a propagation ordering (budgeted DFS over covered-variable
// sets; exceeding the budget yields indeterminate).  Requires n <= 60.
PropagationResult propagation_connected(const Lin3Instance& inst,
                                        std::size_t state_budget = 1u << 22);

// The five-variable instance whose constraint hypergraph is propagation
// connected yet which keeps four distinct satisfying assignments.
Lin3Instance ambiguous_connected_instance();

struct CounterexampleReport {
  Lin3Instance instance;
  bool connected = false;
  std::vector<std::array<int, 3>> sequence;
  std::vector<std::vector<int>> solutions;
};

CounterexampleReport counterexample_report();

}  // namespace tenscomp
