#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <system_error>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "bvi/cli.hpp"
#include "bvi/diagnostics.hpp"
#include "bvi/solvers.hpp"

namespace bvi::cli {

using ojson = nlohmann::ordered_json;

namespace {

bool timing_enabled() {
  const char* v = std::getenv("BVI_RECORD_TIMING");
  return v != nullptr && std::string_view(v) == "1";
}

Vector default_x0(const Problem& pr, const ProblemParams& params) {
  const Index n = pr.op.dimension();
  if (pr.id == "power-norm") return Vector::Constant(n, params.alpha);
  if (pr.id == "quartic") return Vector::Constant(n, 0.5);
  if (pr.id == "erm") return Vector::Zero(n);
  return Vector::Constant(n, 0.5);
}

struct Row {
  std::size_t iter = 0;
  std::uint64_t oracle_calls = 0;
  Vector point;
  std::optional<double> L;
  std::optional<std::size_t> restart;
  double elapsed_ms = 0.0;
  std::optional<double> gap;
  std::optional<double> bregman;
  std::optional<double> sq_dist;
};

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> slope_of(const std::vector<Row>& rows, std::optional<double> Row::*field) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    const auto& v = r.*field;
    if (v && *v > 0.0 && std::isfinite(*v)) pts.emplace_back(static_cast<double>(r.iter), *v);
  }
  if (pts.size() < 4 || pts.front().first == pts.back().first) return std::nullopt;
  return rate_fit(pts);
}

std::vector<Vector> gap_candidates(const ExperimentConfig& cfg, const FeasibleSet& q, const std::vector<Vector>& trace) {
  std::vector<Vector> out;
  if (cfg.diagnostics.vertices) out = q.vertices(12);
  if (cfg.diagnostics.samples > 0) {
    auto drawn = make_candidates(q, SampledCandidates{cfg.diagnostics.samples, cfg.seed});
    out.insert(out.end(), drawn.begin(), drawn.end());
  }
  if (cfg.diagnostics.include_trace) {
    for (const auto& p : trace) out.push_back(q.project(p));
  }
  return out;
}

// Writes every file to a temporary sibling first and renames only once all
// of them are written, so a failed run leaves no partial outputs.
void write_all(const std::vector<std::pair<std::filesystem::path, const std::string*>>& files) {
  std::vector<std::filesystem::path> staged;
  try {
    for (const auto& [path, content] : files) {
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      std::filesystem::path tmp = path;
      tmp += ".tmp";
      staged.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out || !(out << *content) || !out.flush()) {
        throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
      }
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& tmp : staged) std::filesystem::remove(tmp, ec);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) std::filesystem::rename(staged[i], files[i].first);
}

}  // namespace

std::filesystem::path resolve_output(const std::filesystem::path& p) {
  const char* dir = std::getenv("BVI_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || p.is_absolute()) return p;
  return std::filesystem::path(dir) / p;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const Problem pr = make_problem(cfg.problem_id, cfg.problem);
  const Index n = pr.op.dimension();
  const BregmanDivergence div(pr.prox);
  const MethodSpec& m = cfg.method;

  const Vector x0 = m.x0 ? *m.x0 : default_x0(pr, cfg.problem);
  if (x0.size() != n) throw ConfigError("/method/x0", fmt::format("length must be {}", n));
  if (!pr.set.contains(x0, 1e-12)) throw ConfigError("/method/x0", "point is not in the feasible set");

  const std::optional<double> mu = m.mu ? m.mu : pr.op.constants().mu;
  const std::optional<double> M = m.M ? m.M : pr.op.constants().M;
  const bool needs_mu = m.id != MethodId::Apm;
  if (needs_mu && !mu) throw ConfigError("/method/mu", "required: the problem declares no mu");
  const std::optional<Vector> x_star = cfg.diagnostics.known_solution ? pr.solution : std::nullopt;

  const bool timing = timing_enabled();
  const auto t0 = std::chrono::steady_clock::now();
  auto since_start = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };

  std::vector<Row> rows;
  std::vector<Vector> trace{x0};
  const Observer observer = [&](const IterationEvent& e) {
    Row r;
    r.iter = e.iteration;
    r.oracle_calls = e.oracle_calls;
    r.point = e.point;
    r.L = e.L;
    r.restart = e.restart;
    if (timing) r.elapsed_ms = since_start();
    rows.push_back(std::move(r));
    trace.push_back(e.iterate);
  };

  SolverReport report;
  std::optional<double> theoretical_bound;
  std::optional<double> R0_sq_used;
  switch (m.id) {
    case MethodId::MirrorDescent:
    case MethodId::MirrorDescentDual: {
      MirrorDescentConfig md{.mu = *mu, .iterations = m.N, .x0 = x0, .M = M, .prox = {}, .observer = observer};
      if (m.id == MethodId::MirrorDescent) {
        report = mirror_descent_vi(pr.op, div, pr.set, md);
        theoretical_bound = report.certificate;
      } else {
        report = mirror_descent_dual_norm_variant(pr.op, div, pr.set, md);
        theoretical_bound = report.reference_bound;
      }
      break;
    }
    case MethodId::Apm: {
      ApmConfig apm{.L0 = m.L0, .z0 = x0, .fixed_L = m.fixed_L, .prox = {}, .observer = observer};
      if (m.iterations) {
        apm.stop = IterationLimit{*m.iterations};
      } else {
        apm.stop = SumThreshold{*m.sum_threshold};
      }
      report = adaptive_prox_mirror(pr.op, div, pr.set, apm);
      break;
    }
    case MethodId::RestartedApm: {
      std::optional<double> R0_sq = m.R0_sq;
      if (!R0_sq && x_star) {
        const double v = div(*x_star, x0);
        R0_sq = v > 0.0 ? v : 0.5 * *m.eps;
      }
      if (!R0_sq) throw ConfigError("/method/R0_sq", "required: the problem has no known solution");
      R0_sq_used = R0_sq;
      RestartConfig rc{.mu = *mu,
                       .omega = m.omega,
                       .x0 = x0,
                       .R0_sq = *R0_sq,
                       .eps = *m.eps,
                       .L0 = m.L0,
                       .fixed_L = m.fixed_L,
                       .prox = {},
                       .observer = observer};
      report = restarted_apm(pr.op, div, pr.set, rc).second;
      theoretical_bound = report.reference_bound;
      break;
    }
  }
  const double wall_ms = since_start();

  // Diagnostics on the reported points; the operator's counter is not part
  // of the solver's oracle accounting from here on.
  const std::vector<Vector> candidates = gap_candidates(cfg, pr.set, trace);
  std::optional<GapEvaluator> gap;
  if (!candidates.empty()) gap.emplace(pr.op, pr.set, candidates);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Row& r = rows[i];
    const bool last = i + 1 == rows.size();
    if (gap && ((i + 1) % cfg.diagnostics.gap_stride == 0 || last)) r.gap = (*gap)(r.point).value;
    if (x_star) {
      r.bregman = div(*x_star, r.point);
      r.sq_dist = (*x_star - r.point).squaredNorm();
    }
  }

  ExperimentOutput out;
  out.rows = rows.size();
  std::string csv = "iter,oracle_calls,gap_restricted,bregman_to_solution,sq_dist_to_solution,L_accepted,restart_index,elapsed_ms\n";
  for (const auto& r : rows) {
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", r.iter, r.oracle_calls, cell(r.gap), cell(r.bregman),
                       cell(r.sq_dist), cell(r.L), r.restart ? fmt::format("{}", *r.restart) : std::string(),
                       timing ? fmt::format("{:.3f}", r.elapsed_ms) : std::string());
  }
  out.csv = std::move(csv);

  const Vector& output = report.output;
  ojson summary;
  summary["seed"] = cfg.seed;
  ojson problem;
  problem["id"] = pr.id;
  problem["dimension"] = n;
  problem["mu"] = opt_json(pr.op.constants().mu);
  problem["M"] = opt_json(pr.op.constants().M);
  problem["L"] = opt_json(pr.op.constants().L);
  problem["known_solution"] = pr.solution.has_value();
  summary["problem"] = problem;
  ojson method;
  method["id"] = method_name(m.id);
  method["mu"] = opt_json(mu);
  method["M"] = opt_json(M);
  if (m.id == MethodId::MirrorDescent || m.id == MethodId::MirrorDescentDual) method["N"] = m.N;
  if (m.id == MethodId::Apm || m.id == MethodId::RestartedApm) {
    method["L0"] = m.L0;
    method["fixed_L"] = opt_json(m.fixed_L);
  }
  if (m.id == MethodId::RestartedApm) {
    method["eps"] = *m.eps;
    method["R0_sq"] = *R0_sq_used;
    method["Omega"] = opt_json(m.omega ? m.omega : pr.prox.omega());
  }
  summary["method"] = method;

  summary["iterations"] = report.iterations;
  summary["rows"] = rows.size();
  summary["oracle_calls"] = report.oracle_calls;
  summary["certificate"] = opt_json(report.certificate);
  summary["theoretical_bound"] = opt_json(theoretical_bound);
  summary["gap_candidates"] = candidates.size();

  ojson final_row;
  final_row["gap_restricted"] = rows.empty() ? ojson(nullptr) : opt_json(rows.back().gap);
  final_row["bregman_to_solution"] = x_star ? ojson(div(*x_star, output)) : ojson(nullptr);
  final_row["sq_dist_to_solution"] = x_star ? ojson((*x_star - output).squaredNorm()) : ojson(nullptr);
  summary["final"] = final_row;

  ojson slopes;
  slopes["gap_restricted"] = opt_json(slope_of(rows, &Row::gap));
  slopes["bregman_to_solution"] = opt_json(slope_of(rows, &Row::bregman));
  slopes["sq_dist_to_solution"] = opt_json(slope_of(rows, &Row::sq_dist));
  summary["slope_fit"] = slopes;

  if (m.id == MethodId::Apm || m.id == MethodId::RestartedApm) {
    summary["sum_inverse_L"] = report.sum_inverse_L;
    double L_max = 0.0;
    for (double L : report.L_history) L_max = std::max(L_max, L);
    summary["L_max"] = L_max;
    summary["acceptance_failures"] = report.acceptance_failures;
  }
  if (m.id == MethodId::RestartedApm) {
    summary["restarts"] = report.restarts;
    summary["restart_radii"] = report.restart_radii;
    summary["restart_radii_listing"] = report.restart_radii_listing;
    summary["restart_sums"] = report.restart_sums;
    summary["inner_iterations_per_restart"] = report.inner_iterations_per_restart;
  }
  if (pr.saddle) {
    auto [u, v] = split_saddle_point(*pr.saddle, output);
    summary["saddle_gap"] = saddle_gap(*pr.saddle, u, v, cfg.diagnostics.samples, cfg.seed).value;
  }
  if (n <= 50) summary["output_point"] = std::vector<double>(output.data(), output.data() + output.size());
  if (timing) summary["wall_time_ms"] = wall_ms;
  out.summary = summary.dump(2) + "\n";

  if (cfg.outputs.svg) {
    std::vector<Series> series;
    for (auto [name, field] : {std::pair{"gap_restricted", &Row::gap}, std::pair{"bregman_to_solution", &Row::bregman}}) {
      Series s{name, {}, {}};
      for (const auto& r : rows) {
        if (const auto& v = r.*field) {
          s.x.push_back(static_cast<double>(r.iter));
          s.y.push_back(*v);
        }
      }
      series.push_back(std::move(s));
    }
    out.svg = render_svg(series, "iteration");
  }
  return out;
}

int run_solve(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  ExperimentOutput result;
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    result = run_experiment(cfg);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedOperation& e) {
    err << "unsupported: " << e.what() << "\n";
    return 2;
  }

  try {
    std::vector<std::pair<std::filesystem::path, const std::string*>> files{
        {resolve_output(cfg.outputs.csv), &result.csv}, {resolve_output(cfg.outputs.summary), &result.summary}};
    if (cfg.outputs.svg && result.svg) files.emplace_back(resolve_output(*cfg.outputs.svg), &*result.svg);
    write_all(files);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return 2;
  }
  out << fmt::format("{} on {}: {} rows -> {}\n", method_name(cfg.method.id), cfg.problem_id, result.rows,
                     resolve_output(cfg.outputs.csv).string());
  return 0;
}

}  // namespace bvi::cli
