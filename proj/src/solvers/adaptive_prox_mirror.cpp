#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "bvi/errors.hpp"
#include "bvi/solvers.hpp"
#include "iterate_store.hpp"

namespace bvi {

namespace {

constexpr double kMinTrialL = 1e-12;

struct InnerSettings {
  const Observer* observer = nullptr;
  std::optional<std::size_t> restart;
  std::size_t iteration_offset = 0;
  std::uint64_t call_origin = 0;
};

void validate_common(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q) {
  if (g.dimension() != q.dimension() || div.dimension() != q.dimension()) {
    throw InvalidArgument("proximal mirror method: operator, divergence and set dimensions differ");
  }
}

SolverReport run_apm(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q, const ApmConfig& cfg,
                     const InnerSettings& settings) {
  if (!(cfg.L0 > 0.0) || !std::isfinite(cfg.L0)) throw InvalidArgument("proximal mirror method: L0 must be positive");
  if (cfg.fixed_L && (!(*cfg.fixed_L > 0.0) || !std::isfinite(*cfg.fixed_L))) {
    throw InvalidArgument("proximal mirror method: fixed L must be positive");
  }
  if (cfg.max_doublings < 0) throw InvalidArgument("proximal mirror method: max_doublings must be nonnegative");
  require_dimension(cfg.z0, q.dimension(), "proximal mirror method z0");
  if (!q.contains(cfg.z0, 1e-12)) throw InvalidArgument("proximal mirror method: z0 is not in Q");

  std::size_t limit = cfg.max_iterations;
  double threshold = std::numeric_limits<double>::infinity();
  if (const auto* it = std::get_if<IterationLimit>(&cfg.stop)) {
    if (it->iterations == 0) throw InvalidArgument("proximal mirror method: iteration limit must be positive");
    limit = it->iterations;
  } else {
    threshold = std::get<SumThreshold>(cfg.stop).threshold;
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
      throw InvalidArgument("proximal mirror method: sum threshold must be positive");
    }
  }

  detail::Stopwatch clock;
  const std::uint64_t calls0 = g.call_count();
  const ProxFunction& d = div.prox();
  detail::IterateStore store(q.dimension());

  SolverReport r;
  Vector z = cfg.z0;
  Vector w = z;
  double L = cfg.L0;
  std::size_t k = 0;
  store.offer(0, z);
  while (k < limit && r.sum_inverse_L < threshold) {
    const Vector gz = g(z);
    double trial = cfg.fixed_L ? *cfg.fixed_L : std::max(0.5 * L, kMinTrialL);
    Vector z_next;
    for (int doubling = 0;; ++doubling) {
      w = prox_step(d, q, z, gz / trial, cfg.prox);
      const Vector gw = g(w);
      z_next = prox_step(d, q, z, gw / trial, cfg.prox);
      const double lhs = (gz - gw).dot(z_next - w);
      const double rhs = trial * (div(w, z) + div(z_next, w));
      // Guard against rounding when both sides vanish near a solution.
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(lhs) + std::abs(rhs));
      const bool accepted = lhs <= rhs + slack;
      if (cfg.fixed_L) {
        if (!accepted) ++r.acceptance_failures;
        break;
      }
      if (accepted) break;
      if (doubling >= cfg.max_doublings) {
        throw NumericalFailure(
            fmt::format("proximal mirror method: line search did not accept after {} doublings (L = {:g})",
                        cfg.max_doublings, trial),
            lhs - rhs);
      }
      trial *= 2.0;
    }
    L = trial;
    z = std::move(z_next);
    ++k;
    r.L_history.push_back(L);
    r.sum_inverse_L += 1.0 / L;
    store.offer(k, z);
    if (settings.observer && *settings.observer) {
      (*settings.observer)(IterationEvent{
          .iteration = settings.iteration_offset + k,
          .point = w,
          .iterate = z,
          .oracle_calls = g.call_count() - settings.call_origin,
          .L = L,
          .restart = settings.restart,
      });
    }
  }
  if (r.sum_inverse_L < threshold) {
    if (std::holds_alternative<SumThreshold>(cfg.stop)) {
      throw NumericalFailure(
          fmt::format("proximal mirror method: sum threshold not reached within {} iterations", limit),
          threshold - r.sum_inverse_L);
    }
  }
  store.finish(k, z);
  r.iterates = store.take_points();
  r.iterate_indices = store.take_indices();
  r.output = w;
  r.final_iterate = z;
  r.iterations = k;
  r.oracle_calls = g.call_count() - calls0;
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

}  // namespace

SolverReport adaptive_prox_mirror(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
                                  const ApmConfig& cfg) {
  validate_common(g, div, q);
  InnerSettings settings;
  settings.observer = &cfg.observer;
  settings.call_origin = g.call_count();
  return run_apm(g, div, q, cfg, settings);
}

std::size_t restart_count(double R0_sq, double eps) {
  if (!(R0_sq > 0.0) || !(eps > 0.0)) throw InvalidArgument("restart_count: R0^2 and eps must be positive");
  const double v = std::ceil(std::log2(2.0 * R0_sq / eps) - 1e-12);
  return v > 0.0 ? static_cast<std::size_t>(v) : 0;
}

double restart_iteration_bound(double L, double omega, double mu, double R0_sq, double eps) {
  return std::ceil((2.0 * L * omega / mu) * std::log2(R0_sq / eps));
}

std::pair<Vector, SolverReport> restarted_apm(const VIOperator& g, const BregmanDivergence& div_base,
                                              const FeasibleSet& q, const RestartConfig& cfg) {
  validate_common(g, div_base, q);
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu)) throw InvalidArgument("restarted method: mu must be positive");
  if (!(cfg.R0_sq > 0.0) || !std::isfinite(cfg.R0_sq)) throw InvalidArgument("restarted method: R0^2 must be positive");
  if (!(cfg.eps > 0.0) || !std::isfinite(cfg.eps)) throw InvalidArgument("restarted method: eps must be positive");
  const ProxFunction& base = div_base.prox();
  const std::optional<double> omega = cfg.omega ? cfg.omega : base.omega();
  if (!omega || !(*omega > 0.0)) throw InvalidArgument("restarted method: Omega is unknown or nonpositive");
  require_dimension(cfg.x0, q.dimension(), "restarted method x0");
  if (!q.contains(cfg.x0, 1e-12)) throw InvalidArgument("restarted method: x0 is not in Q");

  detail::Stopwatch clock;
  const std::uint64_t calls0 = g.call_count();
  const std::size_t P = restart_count(cfg.R0_sq, cfg.eps);

  SolverReport r;
  r.restart_radii.push_back(cfg.R0_sq);
  r.iterates.push_back(cfg.x0);
  r.iterate_indices.push_back(0);
  Vector x = cfg.x0;
  double R_sq = cfg.R0_sq;
  double L = cfg.L0;
  std::size_t total = 0;
  for (std::size_t p = 0; p < P; ++p) {
    const double R = std::sqrt(R_sq);
    const BregmanDivergence div_p(shifted_scaled_prox(base, x, R));
    ApmConfig inner{
        .L0 = L,
        .stop = SumThreshold{*omega / cfg.mu},
        .z0 = x,
        .fixed_L = cfg.fixed_L,
        .max_doublings = cfg.max_doublings,
        .max_iterations = cfg.max_inner_iterations,
        .prox = cfg.prox,
        .observer = {},
    };
    InnerSettings settings{
        .observer = &cfg.observer, .restart = p, .iteration_offset = total, .call_origin = calls0};
    SolverReport in = run_apm(g, div_p, q, inner, settings);

    const double S = in.sum_inverse_L;
    const double next = *omega * R_sq / (2.0 * cfg.mu * S);
    const double listing =
        *omega * cfg.R0_sq / (std::ldexp(1.0, static_cast<int>(p) + 1) * cfg.mu * S);
    if (!(next > 0.0) || !std::isfinite(next)) {
      throw NumericalFailure("restarted method: nonpositive radius estimate", next);
    }
    R_sq = std::min(next, 0.5 * R_sq);
    x = in.output;
    L = in.L_history.empty() ? L : in.L_history.back();

    total += in.iterations;
    r.inner_iterations_per_restart.push_back(in.iterations);
    r.restart_sums.push_back(S);
    r.restart_radii.push_back(R_sq);
    r.restart_radii_listing.push_back(listing);
    r.L_history.insert(r.L_history.end(), in.L_history.begin(), in.L_history.end());
    r.sum_inverse_L += S;
    r.acceptance_failures += in.acceptance_failures;
    r.iterates.push_back(x);
    r.iterate_indices.push_back(total);
    r.final_iterate = in.final_iterate;
  }
  if (P == 0) r.final_iterate = x;
  r.output = x;
  r.iterations = total;
  r.restarts = P;
  const std::optional<double> L_known = cfg.fixed_L ? cfg.fixed_L : g.constants().L;
  if (L_known) r.reference_bound = restart_iteration_bound(*L_known, *omega, cfg.mu, cfg.R0_sq, cfg.eps);
  r.oracle_calls = g.call_count() - calls0;
  r.wall_time_ms = clock.elapsed_ms();
  return {x, std::move(r)};
}

}  // namespace bvi
