#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tenscomp/altmin.hpp"
#include "tenscomp/factor_model.hpp"
#include "tenscomp/io.hpp"
#include "tenscomp/rng.hpp"
#include "tenscomp/sampling.hpp"

using namespace tenscomp;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "tenscomp_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("tensor text round-trips bit-exactly") {
  FactorModel truth = generate_orthogonal_model(12, 2, {2.0, 1.0}, 3);
  SparseSymmetricTensor t = sample_bernoulli(truth, 0.3, 5);
  REQUIRE(t.nnz() > 0);
  std::stringstream buf;
  write_tensor_text(buf, t);
  SparseSymmetricTensor back = read_tensor_text(buf);
  CHECK(back.dim() == t.dim());
  REQUIRE(back.nnz() == t.nnz());
  auto ea = t.entries();
  auto eb = back.entries();
  for (std::size_t x = 0; x < ea.size(); ++x) {
    CHECK(ea[x].i == eb[x].i);
    CHECK(ea[x].j == eb[x].j);
    CHECK(ea[x].k == eb[x].k);
    CHECK(ea[x].value == eb[x].value);  // %.17g survives the round trip
  }
}

TEST_CASE("tensor text rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::stringstream in(s);
    return read_tensor_text(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("wrongmagic n=3 nnz=0\n"), ParseError);
  CHECK_THROWS_AS(parse("symtensor3 n=3 nnz=2\n0 0 0 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse("symtensor3 n=3 nnz=1\n0 0 abc 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse("symtensor3 n=3 nnz=1\n1 0 2 1.0\n"), ParseError);
  CHECK_THROWS_AS(parse("symtensor3 n=3 nnz=1\n0 0 0 1.0 extra\n"), ParseError);
  CHECK_THROWS_AS(parse("symtensor3 n=3 nnz=1\n0 0 5 1.0\n"), ParseError);
}

TEST_CASE("factor model json preserves values and recovers orthogonality") {
  FactorModel m = generate_orthogonal_model(8, 3, {3.0, 2.0, 1.0}, 7);
  std::stringstream buf;
  write_factor_model_json(buf, m);
  FactorModel back = read_factor_model_json(buf);
  CHECK(back.n == m.n);
  CHECK(back.r == m.r);
  CHECK((back.sigmas - m.sigmas).norm() == 0.0);
  CHECK((back.vectors - m.vectors).norm() == 0.0);
  CHECK(back.orthogonal);

  FactorModel skew = generate_correlated_model(10, 2, 0.5, {1.0, 1.0}, 11);
  std::stringstream buf2;
  write_factor_model_json(buf2, skew);
  FactorModel back2 = read_factor_model_json(buf2);
  CHECK_FALSE(back2.orthogonal);
  CHECK((back2.vectors - skew.vectors).norm() == 0.0);
}

TEST_CASE("factor model json rejects garbage") {
  auto parse = [](const std::string& s) {
    std::stringstream in(s);
    return read_factor_model_json(in);
  };
  CHECK_THROWS_AS(parse("not json at all"), ParseError);
  CHECK_THROWS_AS(parse("{\"n\": 4, \"r\": 1}"), ParseError);
  CHECK_THROWS_AS(
      parse("{\"n\": 4, \"r\": 2, \"sigmas\": [1.0], \"vectors\": [[1,0,0,0]]}"),
      ParseError);
}

TEST_CASE("sample plan files resolve their tensor reference") {
  auto dir = temp_dir();
  FactorModel truth = generate_orthogonal_model(10, 1, {1.0}, 13);
  SparseSymmetricTensor omega = sample_bernoulli(truth, 0.4, 17);
  SamplePlan plan = split_samples(omega, 3, 19);
  plan.p = 0.4;
  plan.seed = 19;
  plan.tensor_path = "plan_tensor.txt";
  write_tensor_text_file((dir / "plan_tensor.txt").string(), omega);
  write_sample_plan_json_file((dir / "plan.json").string(), plan);

  SamplePlan back = read_sample_plan_json_file((dir / "plan.json").string());
  CHECK(back.p == plan.p);
  CHECK(back.seed == plan.seed);
  REQUIRE(back.partitions.size() == plan.partitions.size());
  CHECK(back.partitions == plan.partitions);
  CHECK(back.full_omega.nnz() == omega.nnz());
  for (const auto& e : back.full_omega.entries())
    CHECK(e.value == omega.value(e.i, e.j, e.k));
}

TEST_CASE("trace csv formats blanks for missing columns") {
  ConvergenceTrace trace;
  trace.rows.push_back({1, 0.5, 0.25, 0.125, 0.001});
  trace.rows.push_back({2, 0.1, std::nan(""), std::nan(""), 0.002});
  std::stringstream buf;
  write_trace_csv(buf, trace);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "iter,fit_error,rmse,d_infinity,seconds");
  std::getline(buf, line);
  CHECK(line.substr(0, 2) == "1,");
  CHECK(line.find("0.5") != std::string::npos);
  std::getline(buf, line);
  // NaN rmse and d_infinity leave consecutive empty fields
  CHECK(line.find(",,,") != std::string::npos);
  CHECK(line.substr(0, 2) == "2,");
}

TEST_CASE("parity instances round-trip through the one-based format") {
  Lin3Instance inst = generate_planted(12, 0.2, 23);
  REQUIRE_FALSE(inst.equations.empty());
  std::stringstream buf;
  write_lin3(buf, inst);
  std::string header;
  std::getline(buf, header);
  std::stringstream expect;
  expect << "p 3lin 12 " << inst.equations.size();
  CHECK(header == expect.str());
  buf.seekg(0);
  Lin3Instance back = read_lin3(buf);
  CHECK(back.n == inst.n);
  REQUIRE(back.equations.size() == inst.equations.size());
  for (std::size_t e = 0; e < back.equations.size(); ++e) {
    CHECK(back.equations[e].i == inst.equations[e].i);
    CHECK(back.equations[e].j == inst.equations[e].j);
    CHECK(back.equations[e].k == inst.equations[e].k);
    CHECK(back.equations[e].rhs == inst.equations[e].rhs);
  }
}

TEST_CASE("parity parser rejects malformed instances") {
  auto parse = [](const std::string& s) {
    std::stringstream in(s);
    return read_lin3(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("p 2lin 5 1\n1 2 3 1\n"), ParseError);
  CHECK_THROWS_AS(parse("p 3lin 5 2\n1 2 3 1\n"), ParseError);
  CHECK_THROWS_AS(parse("p 3lin 5 1\n3 2 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse("p 3lin 5 1\n0 1 2 1\n"), ParseError);  // one-based
  CHECK_THROWS_AS(parse("p 3lin 5 1\n1 2 6 1\n"), ParseError);
  CHECK_THROWS_AS(parse("p 3lin 5 1\n1 2 3 2\n"), ParseError);
}

TEST_CASE("file helpers surface missing paths") {
  CHECK_THROWS_AS(read_tensor_text_file("/nonexistent/nope.txt"), ParseError);
  CHECK_THROWS_AS(read_factor_model_json_file("/nonexistent/nope.json"),
                  ParseError);
  CHECK_THROWS_AS(read_lin3_file("/nonexistent/nope.3lin"), ParseError);
}
