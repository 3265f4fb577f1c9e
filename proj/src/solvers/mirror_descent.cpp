#include <cmath>

#include <fmt/format.h>

#include "bvi/errors.hpp"
#include "bvi/solvers.hpp"
#include "iterate_store.hpp"

namespace bvi {

std::vector<double> averaging_weights(std::size_t N) {
  if (N == 0) throw InvalidArgument("averaging_weights: N must be at least 1");
  const double denom = static_cast<double>(N) * static_cast<double>(N + 1);
  std::vector<double> w(N);
  for (std::size_t k = 1; k <= N; ++k) w[k - 1] = 2.0 * static_cast<double>(k) / denom;
  return w;
}

namespace {

void validate(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
              const MirrorDescentConfig& cfg) {
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu)) throw InvalidArgument("mirror descent: mu must be positive");
  if (cfg.iterations == 0) throw InvalidArgument("mirror descent: N must be at least 1");
  if (cfg.M && !(*cfg.M > 0.0)) throw InvalidArgument("mirror descent: M must be positive");
  if (g.dimension() != q.dimension() || div.dimension() != q.dimension()) {
    throw InvalidArgument("mirror descent: operator, divergence and set dimensions differ");
  }
  require_dimension(cfg.x0, q.dimension(), "mirror descent x0");
  if (!q.contains(cfg.x0, 1e-12)) throw InvalidArgument("mirror descent: x0 is not in Q");
}

struct MirrorRun {
  SolverReport report;
  std::vector<double> grad_sq_norms;  // |g(x_k)|_2^2, k = 0..N
};

MirrorRun run_mirror_descent(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
                             const MirrorDescentConfig& cfg) {
  validate(g, div, q, cfg);
  detail::Stopwatch clock;
  const std::uint64_t calls0 = g.call_count();
  const std::size_t N = cfg.iterations;
  const std::vector<double> weights = averaging_weights(N);

  MirrorRun run;
  run.grad_sq_norms.reserve(N + 1);
  detail::IterateStore store(q.dimension());

  Vector x = cfg.x0;
  Vector running = Vector::Zero(x.size());
  Vector average = Vector::Zero(x.size());
  store.offer(0, x);
  for (std::size_t k = 0; k < N; ++k) {
    const Vector gk = g(x);
    run.grad_sq_norms.push_back(gk.squaredNorm());
    const double h = 2.0 / (cfg.mu * static_cast<double>(k + 1));
    x = prox_step(div.prox(), q, x, h * gk, cfg.prox);

    const std::size_t idx = k + 1;
    const double kd = static_cast<double>(idx);
    average += weights[k] * x;
    running = ((kd - 1.0) / (kd + 1.0)) * running + (2.0 / (kd + 1.0)) * x;
    store.offer(idx, x);
    if (cfg.observer) {
      cfg.observer(IterationEvent{
          .iteration = idx,
          .point = running,
          .iterate = x,
          .oracle_calls = g.call_count() - calls0,
          .L = std::nullopt,
          .restart = std::nullopt,
      });
    }
  }
  run.grad_sq_norms.push_back(g(x).squaredNorm());
  store.finish(N, x);

  SolverReport& r = run.report;
  r.iterates = store.take_points();
  r.iterate_indices = store.take_indices();
  r.averaged_point = average;
  r.output = average;
  r.final_iterate = x;
  r.iterations = N;
  const std::optional<double> M = cfg.M ? cfg.M : g.constants().M;
  if (M) r.certificate = 2.0 * *M * *M / (cfg.mu * static_cast<double>(N + 1));
  if (const auto sigma = div.prox().strong_convexity(); sigma && *sigma > 0.0) {
    double worst = 0.0;
    for (double s : run.grad_sq_norms) worst = std::max(worst, s);
    r.max_dual_norm = std::sqrt(worst / *sigma);
  }
  r.oracle_calls = g.call_count() - calls0;
  r.wall_time_ms = clock.elapsed_ms();
  return run;
}

}  // namespace

SolverReport mirror_descent_vi(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
                               const MirrorDescentConfig& cfg) {
  return run_mirror_descent(g, div, q, cfg).report;
}

SolverReport mirror_descent_dual_norm_variant(const VIOperator& g, const BregmanDivergence& div,
                                              const FeasibleSet& q, const MirrorDescentConfig& cfg) {
  const auto sigma = div.prox().strong_convexity();
  if (!sigma || !(*sigma > 0.0)) {
    throw UnsupportedOperation("dual-norm mirror descent: prox has no known strong convexity modulus");
  }
  MirrorRun run = run_mirror_descent(g, div, q, cfg);
  SolverReport& r = run.report;
  const std::size_t N = cfg.iterations;
  double sum = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    const double kd = static_cast<double>(k);
    sum += kd * (run.grad_sq_norms[k] / *sigma) / (kd + 1.0);
  }
  const double Nd = static_cast<double>(N);
  r.reference_bound = r.certificate;
  r.certificate = 2.0 * sum / (cfg.mu * Nd * (Nd + 1.0));
  return r;
}

}  // namespace bvi
