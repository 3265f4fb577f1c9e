#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "bvi/cli.hpp"

namespace bvi::cli {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

const json& require_object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(child(path, key), "unknown key");
  }
  return j;
}

const json* find(const json& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

std::optional<double> positive(const json& obj, const std::string& key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) return std::nullopt;
  const double v = number(*j, child(path, key));
  if (!(v > 0.0)) throw ConfigError(child(path, key), "must be positive");
  return v;
}

std::optional<std::uint64_t> count(const json& obj, const std::string& key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) return std::nullopt;
  if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<std::int64_t>() >= 0)) {
    throw ConfigError(child(path, key), "expected a nonnegative integer");
  }
  return j->get<std::uint64_t>();
}

std::optional<bool> flag(const json& obj, const std::string& key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) return std::nullopt;
  if (!j->is_boolean()) throw ConfigError(child(path, key), "expected true or false");
  return j->get<bool>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) throw ConfigError(child(path, key), "required");
  if (!j->is_string() || j->get<std::string>().empty()) throw ConfigError(child(path, key), "expected a non-empty string");
  return j->get<std::string>();
}

Vector vector_value(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = number(j[i], fmt::format("{}/{}", path, i));
  return v;
}

Matrix matrix_value(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = vector_value(j[i], fmt::format("{}/{}", path, i));
    if (i == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw ConfigError(fmt::format("{}/{}", path, i), "rows must have equal length");
    }
    m.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

void parse_problem(const json& j, ExperimentConfig& cfg) {
  const std::string path = "/problem";
  require_object(j, path, {"id", "n", "p", "alpha", "m", "delta", "mu_base", "eps", "E", "A", "C", "b", "d"});
  cfg.problem_id = text(j, "id", path);
  const auto& ids = problem_ids();
  if (std::find(ids.begin(), ids.end(), cfg.problem_id) == ids.end()) {
    throw ConfigError(child(path, "id"), fmt::format("unknown problem '{}'", cfg.problem_id));
  }
  ProblemParams& p = cfg.problem;
  if (auto n = count(j, "n", path)) {
    if (*n == 0) throw ConfigError(child(path, "n"), "must be positive");
    p.n = static_cast<Index>(*n);
  }
  if (auto v = count(j, "p", path)) {
    if (*v < 2) throw ConfigError(child(path, "p"), "must be at least 2");
    p.p = static_cast<int>(*v);
  }
  if (auto m = count(j, "m", path)) {
    if (*m == 0) throw ConfigError(child(path, "m"), "must be positive");
    p.m = static_cast<Index>(*m);
  }
  if (auto v = positive(j, "alpha", path)) p.alpha = *v;
  if (auto v = positive(j, "delta", path)) p.delta = *v;
  if (auto v = positive(j, "mu_base", path)) p.mu_base = *v;
  if (auto v = positive(j, "eps", path)) p.eps = *v;

  const bool any_matrix = find(j, "E") || find(j, "A") || find(j, "C") || find(j, "b") || find(j, "d");
  if (any_matrix) {
    if (cfg.problem_id != "quartic") throw ConfigError(path, "E, A, C, b, d apply to the quartic problem only");
    for (const char* key : {"E", "A", "C", "b", "d"}) {
      if (!find(j, key)) throw ConfigError(child(path, key), "required when any of E, A, C, b, d is given");
    }
    QuarticData q{matrix_value(j["E"], child(path, "E")), matrix_value(j["A"], child(path, "A")),
                  matrix_value(j["C"], child(path, "C")), vector_value(j["b"], child(path, "b")),
                  vector_value(j["d"], child(path, "d"))};
    const Index n = q.E.rows();
    for (const auto& [key, m] : {std::pair{"E", &q.E}, std::pair{"A", &q.A}, std::pair{"C", &q.C}}) {
      if (m->rows() != n || m->cols() != n) throw ConfigError(child(path, key), "must be square of the size of E");
    }
    if (q.b.size() != n) throw ConfigError(child(path, "b"), "length must match E");
    if (q.d.size() != n) throw ConfigError(child(path, "d"), "length must match E");
    p.n = n;
    p.quartic = std::move(q);
  }
  p.seed = cfg.seed;
}

void parse_method(const json& j, ExperimentConfig& cfg) {
  const std::string path = "/method";
  require_object(j, path,
                 {"id", "mu", "M", "N", "L0", "iterations", "sum_threshold", "eps", "R0_sq", "Omega", "fixed_L", "x0"});
  MethodSpec& m = cfg.method;
  const std::string id = text(j, "id", path);
  if (id == "mirror-descent") {
    m.id = MethodId::MirrorDescent;
  } else if (id == "mirror-descent-dual") {
    m.id = MethodId::MirrorDescentDual;
  } else if (id == "apm") {
    m.id = MethodId::Apm;
  } else if (id == "restarted-apm") {
    m.id = MethodId::RestartedApm;
  } else {
    throw ConfigError(child(path, "id"), fmt::format("unknown method '{}'", id));
  }
  m.mu = positive(j, "mu", path);
  m.M = positive(j, "M", path);
  if (auto v = positive(j, "L0", path)) m.L0 = *v;
  m.eps = positive(j, "eps", path);
  m.R0_sq = positive(j, "R0_sq", path);
  m.omega = positive(j, "Omega", path);
  m.fixed_L = positive(j, "fixed_L", path);
  m.sum_threshold = positive(j, "sum_threshold", path);
  if (auto v = count(j, "iterations", path)) {
    if (*v == 0) throw ConfigError(child(path, "iterations"), "must be positive");
    m.iterations = static_cast<std::size_t>(*v);
  }
  if (const json* x0 = find(j, "x0")) {
    m.x0 = vector_value(*x0, child(path, "x0"));
  }

  switch (m.id) {
    case MethodId::MirrorDescent:
    case MethodId::MirrorDescentDual: {
      const auto N = count(j, "N", path);
      if (!N) throw ConfigError(child(path, "N"), "required for mirror descent");
      if (*N == 0) throw ConfigError(child(path, "N"), "must be positive");
      m.N = static_cast<std::size_t>(*N);
      break;
    }
    case MethodId::Apm:
      if (m.iterations.has_value() == m.sum_threshold.has_value()) {
        throw ConfigError(path, "apm needs exactly one of 'iterations' and 'sum_threshold'");
      }
      break;
    case MethodId::RestartedApm:
      if (!m.eps) throw ConfigError(child(path, "eps"), "required for restarted-apm");
      break;
  }
}

void parse_outputs(const json& j, ExperimentConfig& cfg) {
  const std::string path = "/outputs";
  require_object(j, path, {"csv", "summary", "svg"});
  cfg.outputs.csv = text(j, "csv", path);
  cfg.outputs.summary = text(j, "summary", path);
  if (find(j, "svg")) cfg.outputs.svg = text(j, "svg", path);
}

void parse_diagnostics(const json& j, ExperimentConfig& cfg) {
  const std::string path = "/diagnostics";
  require_object(j, path, {"samples", "vertices", "include_trace", "known_solution", "gap_stride"});
  DiagnosticsSpec& d = cfg.diagnostics;
  if (auto v = count(j, "samples", path)) d.samples = static_cast<std::size_t>(*v);
  if (auto v = flag(j, "vertices", path)) d.vertices = *v;
  if (auto v = flag(j, "include_trace", path)) d.include_trace = *v;
  if (auto v = flag(j, "known_solution", path)) d.known_solution = *v;
  if (auto v = count(j, "gap_stride", path)) {
    if (*v == 0) throw ConfigError(child(path, "gap_stride"), "must be positive");
    d.gap_stride = static_cast<std::size_t>(*v);
  }
}

}  // namespace

std::string method_name(MethodId id) {
  switch (id) {
    case MethodId::MirrorDescent:
      return "mirror-descent";
    case MethodId::MirrorDescentDual:
      return "mirror-descent-dual";
    case MethodId::Apm:
      return "apm";
    case MethodId::RestartedApm:
      return "restarted-apm";
  }
  return "unknown";
}

ExperimentConfig parse_config(const json& doc) {
  require_object(doc, "", {"seed", "problem", "method", "outputs", "diagnostics"});
  ExperimentConfig cfg;
  if (auto seed = count(doc, "seed", "")) cfg.seed = *seed;
  for (const char* key : {"problem", "method", "outputs"}) {
    if (!find(doc, key)) throw ConfigError(std::string("/") + key, "required");
  }
  parse_problem(doc["problem"], cfg);
  parse_method(doc["method"], cfg);
  parse_outputs(doc["outputs"], cfg);
  if (const json* d = find(doc, "diagnostics")) parse_diagnostics(*d, cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot read config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("malformed JSON in '{}': {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

}  // namespace bvi::cli
