#include "tenscomp/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tenscomp {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SparseSymmetricTensor read_tensor_text(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++lineno;
  int n = 0;
  std::size_t nnz = 0;
  {
    std::istringstream hs(line);
    std::string magic, nfield, zfield;
    hs >> magic >> nfield >> zfield;
    if (magic != "symtensor3" || nfield.rfind("n=", 0) != 0 ||
        zfield.rfind("nnz=", 0) != 0)
      parse_fail(lineno, "expected 'symtensor3 n=<n> nnz=<count>'");
    try {
      n = std::stoi(nfield.substr(2));
      nnz = std::stoul(zfield.substr(4));
    } catch (const std::exception&) {
      parse_fail(lineno, "bad header numbers");
    }
  }
  std::vector<TensorEntry> entries;
  entries.reserve(nnz);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    TensorEntry e;
    if (!(ls >> e.i >> e.j >> e.k >> e.value))
      parse_fail(lineno, "expected 'i j k value'");
    std::string rest;
    if (ls >> rest) parse_fail(lineno, "trailing tokens");
    if (!(e.i <= e.j && e.j <= e.k))
      parse_fail(lineno, "triple is not canonical (need i <= j <= k)");
    if (e.i < 0 || e.k >= n) parse_fail(lineno, "index outside [0, n)");
    entries.push_back(e);
  }
  if (entries.size() != nnz)
    throw ParseError("header promised " + std::to_string(nnz) +
                     " entries, file holds " + std::to_string(entries.size()));
  try {
    return SparseSymmetricTensor(n, std::move(entries));
  } catch (const Error& err) {
    throw ParseError(std::string("invalid tensor: ") + err.what());
  }
}

SparseSymmetricTensor read_tensor_text_file(const std::string& path) {
  auto in = open_in(path);
  return read_tensor_text(in);
}

void write_tensor_text(std::ostream& out, const SparseSymmetricTensor& t) {
  out << "symtensor3 n=" << t.dim() << " nnz=" << t.nnz() << "\n";
  for (const TensorEntry& e : t.entries())
    out << e.i << " " << e.j << " " << e.k << " " << format_double(e.value)
        << "\n";
}

void write_tensor_text_file(const std::string& path,
                            const SparseSymmetricTensor& t) {
  auto out = open_out(path);
  write_tensor_text(out, t);
}

FactorModel read_factor_model_json(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  FactorModel m;
  try {
    m.n = doc.at("n").get<int>();
    m.r = doc.at("r").get<int>();
    auto sig = doc.at("sigmas").get<std::vector<double>>();
    auto vecs = doc.at("vectors").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(sig.size()) != m.r)
      throw ParseError("sigmas length differs from r");
    if (static_cast<int>(vecs.size()) != m.r)
      throw ParseError("vectors count differs from r");
    m.sigmas = Eigen::Map<const Eigen::VectorXd>(sig.data(), m.r);
    m.vectors.resize(m.n, m.r);
    for (int l = 0; l < m.r; ++l) {
      if (static_cast<int>(vecs[l].size()) != m.n)
        throw ParseError("vector " + std::to_string(l) + " length differs from n");
      m.vectors.col(l) =
          Eigen::Map<const Eigen::VectorXd>(vecs[l].data(), m.n);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model JSON: ") + e.what());
  }
  m.orthogonal = true;
  for (int a = 0; a < m.r && m.orthogonal; ++a)
    for (int b = a + 1; b < m.r; ++b)
      if (std::abs(m.vectors.col(a).dot(m.vectors.col(b))) > 1e-10) {
        m.orthogonal = false;
        break;
      }
  m.validate();
  return m;
}

FactorModel read_factor_model_json_file(const std::string& path) {
  auto in = open_in(path);
  return read_factor_model_json(in);
}

void write_factor_model_json(std::ostream& out, const FactorModel& m) {
  json doc;
  doc["n"] = m.n;
  doc["r"] = m.r;
  doc["sigmas"] = std::vector<double>(m.sigmas.data(), m.sigmas.data() + m.r);
  json vecs = json::array();
  for (int l = 0; l < m.r; ++l) {
    vecs.push_back(std::vector<double>(m.vectors.col(l).data(),
                                       m.vectors.col(l).data() + m.n));
  }
  doc["vectors"] = std::move(vecs);
  out << doc.dump(2) << "\n";
}

void write_factor_model_json_file(const std::string& path,
                                  const FactorModel& m) {
  auto out = open_out(path);
  write_factor_model_json(out, m);
}

void write_sample_plan_json_file(const std::string& path,
                                 const SamplePlan& plan) {
  json doc;
  doc["p"] = plan.p;
  doc["seed"] = plan.seed;
  doc["tensor"] = plan.tensor_path;
  json parts = json::array();
  for (const auto& part : plan.partitions) {
    json triples = json::array();
    for (const Triple& t : part) triples.push_back({t.i, t.j, t.k});
    parts.push_back(std::move(triples));
  }
  doc["parts"] = std::move(parts);
  auto out = open_out(path);
  out << doc.dump() << "\n";
}

SamplePlan read_sample_plan_json_file(const std::string& path) {
  auto in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  SamplePlan plan;
  try {
    plan.p = doc.at("p").get<double>();
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.tensor_path = doc.at("tensor").get<std::string>();
    for (const auto& part : doc.at("parts")) {
      std::vector<Triple> triples;
      for (const auto& t : part) {
        if (!t.is_array() || t.size() != 3)
          throw ParseError("each triple must be [i, j, k]");
        triples.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
      }
      plan.partitions.push_back(std::move(triples));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad plan JSON: ") + e.what());
  }
  std::filesystem::path tensor(plan.tensor_path);
  if (tensor.is_relative())
    tensor = std::filesystem::path(path).parent_path() / tensor;
  plan.full_omega = read_tensor_text_file(tensor.string());
  return plan;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "iter,fit_error,rmse,d_infinity,seconds\n";
  auto field = [](double v) {
    return std::isnan(v) ? std::string() : format_double(v);
  };
  for (const TraceRow& row : trace.rows)
    out << row.iter << "," << field(row.fit_error) << "," << field(row.rmse)
        << "," << field(row.d_infinity) << "," << field(row.seconds) << "\n";
}

void write_trace_csv_file(const std::string& path,
                          const ConvergenceTrace& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
}

Lin3Instance read_lin3(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++lineno;
  Lin3Instance inst;
  std::size_t m = 0;
  {
    std::istringstream hs(line);
    std::string p, kind;
    if (!(hs >> p >> kind >> inst.n >> m) || p != "p" || kind != "3lin")
      parse_fail(lineno, "expected 'p 3lin <n> <m>'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i, j, k, rhs;
    if (!(ls >> i >> j >> k >> rhs)) parse_fail(lineno, "expected 'i j k rhs'");
    std::string rest;
    if (ls >> rest) parse_fail(lineno, "trailing tokens");
    if (!(1 <= i && i < j && j < k && k <= inst.n))
      parse_fail(lineno, "indices must satisfy 1 <= i < j < k <= n");
    if (rhs != 1 && rhs != -1) parse_fail(lineno, "rhs must be +1 or -1");
    inst.equations.push_back({i - 1, j - 1, k - 1, rhs});
  }
  if (inst.equations.size() != m)
    throw ParseError("header promised " + std::to_string(m) +
                     " equations, file holds " +
                     std::to_string(inst.equations.size()));
  inst.validate();
  return inst;
}

Lin3Instance read_lin3_file(const std::string& path) {
  auto in = open_in(path);
  return read_lin3(in);
}

void write_lin3(std::ostream& out, const Lin3Instance& inst) {
  out << "p 3lin " << inst.n << " " << inst.equations.size() << "\n";
  for (const Lin3Equation& e : inst.equations)
    out << e.i + 1 << " " << e.j + 1 << " " << e.k + 1 << " "
        << (e.rhs > 0 ? "1" : "-1") << "\n";
}

void write_lin3_file(const std::string& path, const Lin3Instance& inst) {
  auto out = open_out(path);
  write_lin3(out, inst);
}

}  // namespace tenscomp
