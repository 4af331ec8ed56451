#pragma once

#include <iosfwd>
#include <string>

#include "tenscomp/altmin.hpp"
#include "tenscomp/factor_model.hpp"
#include "tenscomp/max3lin.hpp"
#include "tenscomp/sampling.hpp"
#include "tenscomp/tensor.hpp"

namespace tenscomp {

// Text tensors:  header "symtensor3 n=<n> nnz=<count>", then one
// "i j k value" line per canonical (i <= j <= k, zero-based) entry.
SparseSymmetricTensor read_tensor_text(std::istream& in);
SparseSymmetricTensor read_tensor_text_file(const std::string& path);
void write_tensor_text(std::ostream& out, const SparseSymmetricTensor& t);
void write_tensor_text_file(const std::string& path,
                            const SparseSymmetricTensor& t);

// Factor models as JSON {n, r, sigmas, vectors}; vectors holds r arrays of n
// coordinates.  Reading measures orthogonality to set the flag.
FactorModel read_factor_model_json(std::istream& in);
FactorModel read_factor_model_json_file(const std::string& path);
void write_factor_model_json(std::ostream& out, const FactorModel& m);
void write_factor_model_json_file(const std::string& path,
                                  const FactorModel& m);

// Sample plans as JSON {p, seed, tensor, parts}; `tensor` names the tensor
// file and the loader reads it relative to the plan's directory.
void write_sample_plan_json_file(const std::string& path,
                                 const SamplePlan& plan);
SamplePlan read_sample_plan_json_file(const std::string& path);

// Trace CSV: iter,fit_error,rmse,d_infinity,seconds.  NaN prints as an empty
// field.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_trace_csv_file(const std::string& path,
                          const ConvergenceTrace& trace);

// Parity instances:  header "p 3lin <n> <m>", then "i j k rhs" lines with
// one-based indices and rhs +1 / -1.
Lin3Instance read_lin3(std::istream& in);
Lin3Instance read_lin3_file(const std::string& path);
void write_lin3(std::ostream& out, const Lin3Instance& inst);
void write_lin3_file(const std::string& path, const Lin3Instance& inst);

}  // namespace tenscomp
