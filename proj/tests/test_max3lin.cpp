#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "tenscomp/max3lin.hpp"
#include "tenscomp/rng.hpp"

using namespace tenscomp;

namespace {

long choose3(long n) { return n * (n - 1) * (n - 2) / 6; }

// validates a propagation ordering from scratch
bool valid_sequence(const Lin3Instance& inst,
                    const std::vector<std::array<int, 3>>& seq) {
  if (seq.empty()) return false;
  std::set<int> covered(seq[0].begin(), seq[0].end());
  for (std::size_t t = 1; t < seq.size(); ++t) {
    int overlap = 0;
    for (int v : seq[t]) overlap += covered.count(v);
    if (overlap != 2) return false;
    covered.insert(seq[t].begin(), seq[t].end());
  }
  return static_cast<int>(covered.size()) == inst.n;
}

}  // namespace

TEST_CASE("planted generation basics") {
  Lin3Instance none = generate_planted(10, 0.0, 1);
  CHECK(none.equations.empty());
  REQUIRE(none.planted.has_value());

  Lin3Instance full = generate_planted(8, 1.0, 2);
  CHECK(static_cast<long>(full.equations.size()) == choose3(8));
  CHECK(full.satisfied_count(*full.planted) ==
        static_cast<int>(full.equations.size()));
  full.validate();

  CHECK_THROWS_AS(generate_planted(8, -0.2, 1), DomainError);
  CHECK_THROWS_AS(generate_planted(2, 0.5, 1), ShapeError);
}

TEST_CASE("planted equation counts follow the binomial") {
  const int n = 30;
  const double p = 0.1;
  const double total = static_cast<double>(choose3(n));
  const int seeds = 50;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s)
    sum += static_cast<double>(generate_planted(n, p, 600 + s).equations.size());
  double mean = sum / seeds;
  double sd_of_mean = std::sqrt(total * p * (1.0 - p) / seeds);
  CHECK(std::abs(mean - p * total) <= 3.0 * sd_of_mean);
}

TEST_CASE("instance validation rejects malformed equations") {
  Lin3Instance bad;
  bad.n = 5;
  bad.equations = {{2, 1, 3, 1}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.equations = {{0, 1, 1, 1}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.equations = {{0, 1, 5, 1}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.equations = {{0, 1, 2, 0}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.equations = {{0, 1, 2, 1}};
  bad.planted = std::vector<int>{1, 1, 1, 1};
  CHECK_THROWS_AS(bad.validate(), ShapeError);
}

TEST_CASE("completion solver satisfies the ambiguous instance") {
  Lin3Instance inst = ambiguous_connected_instance();
  Max3linOptions opts;
  opts.seed = 7;
  Max3linResult res = solve_as_completion(inst, opts);
  CHECK(res.total == 3);
  CHECK(res.success);
  CHECK(res.satisfied == 3);
  CHECK(inst.satisfied_count(res.assignment) == 3);
  for (int v : res.assignment) CHECK((v == 1 || v == -1));
  // the assignment must be one of the instance's satisfying set
  auto sols = brute_force_solutions(inst);
  CHECK(std::find(sols.begin(), sols.end(), res.assignment) != sols.end());
}

TEST_CASE("complete data pins the planted assignment") {
  for (int n : {6, 10}) {
    Lin3Instance inst = generate_planted(n, 1.0, 40 + n);
    Max3linOptions opts;
    opts.seed = 11;
    Max3linResult res = solve_as_completion(inst, opts);
    CHECK(res.success);
    CHECK(res.assignment == *inst.planted);
  }
}

TEST_CASE("solver rejects an equation-free instance") {
  Lin3Instance empty;
  empty.n = 5;
  CHECK_THROWS_AS(solve_as_completion(empty, {}), PreconditionError);
}

TEST_CASE("sparse planted instances are satisfied at the working rate") {
  const int n = 100;
  const double p = 40.0 * std::log(static_cast<double>(n)) /
                   std::pow(static_cast<double>(n), 1.5);
  const int seeds = 20;
  int successes = 0;
  for (int s = 0; s < seeds; ++s) {
    Lin3Instance inst = generate_planted(n, p, derive_seed(777, s));
    Max3linOptions opts;
    opts.p = p;
    opts.seed = derive_seed(778, s);
    Max3linResult res = solve_as_completion(inst, opts);
    if (res.success) ++successes;
  }
  MESSAGE("3lin success ", successes, "/", seeds);
  CHECK(successes >= 18);  // >= 90%
}

TEST_CASE("exhaustive solutions of the ambiguous instance match the known four") {
  Lin3Instance inst = ambiguous_connected_instance();
  auto sols = brute_force_solutions(inst);
  std::set<std::vector<int>> got(sols.begin(), sols.end());
  std::set<std::vector<int>> expected{{1, 1, 1, -1, -1},
                                      {1, -1, -1, -1, 1},
                                      {-1, 1, -1, 1, -1},
                                      {-1, -1, 1, 1, 1}};
  CHECK(got == expected);
  for (const auto& x : sols)
    CHECK(inst.satisfied_count(x) == static_cast<int>(inst.equations.size()));
}

TEST_CASE("complete planted instances have a unique solution") {
  Lin3Instance inst = generate_planted(6, 1.0, 13);
  auto sols = brute_force_solutions(inst);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == *inst.planted);
}

TEST_CASE("unconstrained instances admit every assignment") {
  Lin3Instance free;
  free.n = 3;
  auto sols = brute_force_solutions(free);
  CHECK(sols.size() == 8);
}

TEST_CASE("exhaustive enumeration is capped") {
  Lin3Instance big;
  big.n = 25;
  big.equations = {{0, 1, 2, 1}};
  CHECK_THROWS_AS(brute_force_solutions(big), ScaleError);
}

TEST_CASE("planted assignments always appear among the solutions") {
  for (int s = 0; s < 10; ++s) {
    Lin3Instance inst = generate_planted(12, 0.15, 900 + s);
    if (inst.equations.empty()) continue;
    auto sols = brute_force_solutions(inst);
    CHECK(std::find(sols.begin(), sols.end(), *inst.planted) != sols.end());
  }
}

TEST_CASE("propagation ordering of the ambiguous instance") {
  Lin3Instance inst = ambiguous_connected_instance();
  PropagationResult res = propagation_connected(inst);
  REQUIRE(res.status == PropagationResult::Status::connected);
  std::vector<std::array<int, 3>> expected{{0, 1, 2}, {1, 2, 3}, {2, 3, 4}};
  CHECK(res.sequence == expected);
  CHECK(valid_sequence(inst, res.sequence));
}

TEST_CASE("disjoint triples are not propagation connected") {
  Lin3Instance inst;
  inst.n = 6;
  inst.equations = {{0, 1, 2, 1}, {3, 4, 5, 1}};
  CHECK(propagation_connected(inst).status ==
        PropagationResult::Status::disconnected);
}

TEST_CASE("a single covering triple is trivially connected") {
  Lin3Instance inst;
  inst.n = 3;
  inst.equations = {{0, 1, 2, -1}};
  PropagationResult res = propagation_connected(inst);
  CHECK(res.status == PropagationResult::Status::connected);
  CHECK(res.sequence.size() == 1);
}

TEST_CASE("propagation search respects its state budget") {
  Lin3Instance inst = ambiguous_connected_instance();
  PropagationResult res = propagation_connected(inst, 1);
  CHECK(res.status == PropagationResult::Status::indeterminate);
  Lin3Instance big;
  big.n = 61;
  big.equations = {{0, 1, 2, 1}};
  CHECK_THROWS_AS(propagation_connected(big), ScaleError);
}

TEST_CASE("propagation handles chains that must backtrack") {
  // hub edge (0,1,2) extends to two chains; only one covers everything
  Lin3Instance inst;
  inst.n = 7;
  inst.equations = {{0, 1, 2, 1}, {1, 2, 3, 1}, {0, 1, 4, 1},
                    {3, 4, 5, 1}, {4, 5, 6, 1}};
  PropagationResult res = propagation_connected(inst);
  REQUIRE(res.status == PropagationResult::Status::connected);
  CHECK(valid_sequence(inst, res.sequence));
}

TEST_CASE("counterexample report ties the pieces together") {
  CounterexampleReport rep = counterexample_report();
  CHECK(rep.connected);
  CHECK(rep.solutions.size() == 4);
  std::vector<int> paper_listed{1, 1, 1, -1, -1};
  CHECK(std::find(rep.solutions.begin(), rep.solutions.end(), paper_listed) !=
        rep.solutions.end());
  for (const auto& x : rep.solutions)
    CHECK(rep.instance.satisfied_count(x) ==
          static_cast<int>(rep.instance.equations.size()));
  CHECK(valid_sequence(rep.instance, rep.sequence));
}
