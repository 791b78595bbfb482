#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "l1pt/errors.hpp"
#include "l1pt/experiment_harness.hpp"

namespace l1pt {

namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from(const json& j, std::string_view field) {
  if (!j.is_array()) throw ParseError(fmt::format("instance: '{}' must be an array", field), 0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError(fmt::format("instance: '{}'[{}] is not a number", field, i), 0);
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

// Row arrays, or one flat row-major array of m·n numbers.
Eigen::MatrixXd matrix_from(const json& j, int m, int n) {
  if (!j.is_array()) throw ParseError("instance: 'matrix' must be an array", 0);
  Eigen::MatrixXd a(m, n);
  if (!j.empty() && j.front().is_array()) {
    if (j.size() != static_cast<std::size_t>(m)) {
      throw ParseError(fmt::format("instance: matrix has {} rows, m={}", j.size(), m), 0);
    }
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd row = vector_from(j[static_cast<std::size_t>(i)], "matrix row");
      if (row.size() != n) {
        throw ParseError(fmt::format("instance: matrix row {} has {} entries, n={}", i, row.size(), n), 0);
      }
      a.row(i) = row.transpose();
    }
    return a;
  }
  const Eigen::VectorXd flat = vector_from(j, "matrix");
  if (flat.size() != static_cast<Eigen::Index>(m) * n) {
    throw ParseError(fmt::format("instance: flat matrix has {} entries, expected {}", flat.size(),
                                 static_cast<long long>(m) * n), 0);
  }
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < n; ++c) a(i, c) = flat[static_cast<Eigen::Index>(i) * n + c];
  }
  return a;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
  json j;
  j["n"] = instance.cols();
  j["m"] = instance.rows();
  if (instance.sparsity) j["k"] = *instance.sparsity;
  if (instance.seed) j["seed"] = *instance.seed;
  json rows = json::array();
  for (int i = 0; i < instance.rows(); ++i) {
    rows.push_back(vector_json(instance.matrix.row(i).transpose()));
  }
  j["matrix"] = std::move(rows);
  j["y"] = vector_json(instance.measurements);
  if (instance.truth) {
    const Eigen::VectorXd& x = *instance.truth;
    j["x_true"] = vector_json(x);
    json support = json::array();
    json signs = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) {
        support.push_back(i);
        signs.push_back(x[i] > 0.0 ? 1 : -1);
      }
    }
    j["support"] = std::move(support);
    j["signs"] = std::move(signs);
  }
  return j.dump(1);
}

ProblemInstance instance_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset to line number
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(fmt::format("instance: line {}: {}", line, e.what()), line);
  }
  try {
    if (!j.is_object()) throw ParseError("instance: top level must be an object", 0);
    for (const char* f : {"n", "m", "matrix", "y"}) {
      if (!j.contains(f)) throw ParseError(fmt::format("instance: missing field '{}'", f), 0);
    }
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    if (n < 1 || m < 1) throw ParseError(fmt::format("instance: bad sizes m={} n={}", m, n), 0);
    ProblemInstance inst;
    inst.matrix = matrix_from(j.at("matrix"), m, n);
    inst.measurements = vector_from(j.at("y"), "y");
    if (j.contains("x_true") && !j.at("x_true").is_null()) inst.truth = vector_from(j.at("x_true"), "x_true");
    if (j.contains("k") && !j.at("k").is_null()) inst.sparsity = j.at("k").get<int>();
    if (j.contains("seed") && !j.at("seed").is_null()) inst.seed = j.at("seed").get<std::uint64_t>();
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("instance: {}", e.what()), 0);
  } catch (const SpecError& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << instance_to_json(instance) << '\n';
  if (!out) throw Error(fmt::format("write to '{}' failed", path.string()));
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace l1pt
