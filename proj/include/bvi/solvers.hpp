#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "bvi/divergence.hpp"
#include "bvi/feasible_set.hpp"
#include "bvi/operator.hpp"
#include "bvi/prox_step.hpp"
#include "bvi/saddle.hpp"

namespace bvi {

/// Per-iteration callback payload. `point` is the point a method reports at
/// this iteration (running average for mirror descent, w_k for the proximal
/// mirror methods); `iterate` is the raw sequence (x_k or z_{k+1}).
struct IterationEvent {
  std::size_t iteration = 0;  ///< 1-based, global across restarts
  const Vector& point;
  const Vector& iterate;
  std::uint64_t oracle_calls = 0;  ///< calls made by this run so far
  std::optional<double> L;
  std::optional<std::size_t> restart;
};

using Observer = std::function<void(const IterationEvent&)>;

struct MirrorDescentConfig {
  double mu = 0.0;
  std::size_t iterations = 0;  ///< N
  Vector x0;
  /// Overrides the operator's declared M for the certificate.
  std::optional<double> M;
  ProxOptions prox;
  Observer observer;
};

struct IterationLimit {
  std::size_t iterations = 0;
};
struct SumThreshold {
  double threshold = 0.0;  ///< stop once sum 1/L_{k+1} reaches this
};

struct ApmConfig {
  double L0 = 1.0;
  std::variant<IterationLimit, SumThreshold> stop = IterationLimit{};
  Vector z0;
  /// Non-adaptive mode: every step uses this constant, no line search.
  std::optional<double> fixed_L;
  int max_doublings = 64;
  /// Safety cap for the sum-threshold rule.
  std::size_t max_iterations = 10'000'000;
  ProxOptions prox;
  Observer observer;
};

struct RestartConfig {
  double mu = 0.0;
  /// Defaults to the base prox's omega.
  std::optional<double> omega;
  Vector x0;
  double R0_sq = 0.0;
  double eps = 0.0;
  double L0 = 1.0;
  std::optional<double> fixed_L;
  int max_doublings = 64;
  std::size_t max_inner_iterations = 10'000'000;
  ProxOptions prox;
  Observer observer;
};

struct SolverReport {
  /// Stored iterates with their indices; thinned logarithmically when
  /// dimension * iterations exceeds 1e6.
  std::vector<Vector> iterates;
  std::vector<std::size_t> iterate_indices;
  Vector averaged_point;  ///< x-hat (mirror descent)
  Vector output;          ///< the point the method returns
  Vector final_iterate;   ///< x_N or z_N
  std::optional<double> certificate;
  /// Mirror descent dual-norm variant: the 2M^2/(mu(N+1)) certificate for
  /// comparison. Restarts: the total-iteration bound when L is known.
  std::optional<double> reference_bound;
  /// max_k |g(x_k)| / sqrt(sigma) over the run (mirror descent).
  std::optional<double> max_dual_norm;
  std::vector<double> L_history;
  std::vector<std::size_t> inner_iterations_per_restart;
  std::vector<double> restart_radii;          ///< R_p^2, p = 0..P
  std::vector<double> restart_radii_listing;  ///< closed form Omega R_0^2 / (2^(p+1) mu S)
  std::vector<double> restart_sums;           ///< S_{N_p}
  double sum_inverse_L = 0.0;
  std::uint64_t oracle_calls = 0;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  std::size_t acceptance_failures = 0;  ///< fixed-L steps failing the acceptance test
  double wall_time_ms = 0.0;
};

/// w_k = 2k / (N (N + 1)), k = 1..N.
std::vector<double> averaging_weights(std::size_t N);

/// Mirror descent x_{k+1} = argmin_Q h_k <g(x_k), x> + V(x, x_k) with
/// h_k = 2 / (mu (k + 1)), output x-hat = sum_k w_k x_k. Makes N + 1 oracle
/// calls (the last one at x_N). Certificate 2M^2/(mu(N+1)) when M is known.
SolverReport mirror_descent_vi(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
                               const MirrorDescentConfig& cfg);

/// Same iterates; the certificate uses the observed dual norms,
/// (2 / (mu N (N+1))) sum_k k |g(x_k)|_*^2 / (k + 1). Needs a prox with a
/// known strong convexity modulus sigma (|.|_* = |.|_2 / sqrt(sigma)).
SolverReport mirror_descent_dual_norm_variant(const VIOperator& g, const BregmanDivergence& div,
                                              const FeasibleSet& q, const MirrorDescentConfig& cfg);

/// Adaptive proximal mirror method with a doubling line search on L.
/// Returns the last extragradient point w in `output`.
SolverReport adaptive_prox_mirror(const VIOperator& g, const BregmanDivergence& div, const FeasibleSet& q,
                                  const ApmConfig& cfg);

/// Restarted adaptive proximal mirror method; returns x_P and the report.
std::pair<Vector, SolverReport> restarted_apm(const VIOperator& g, const BregmanDivergence& div_base,
                                              const FeasibleSet& q, const RestartConfig& cfg);

/// Number of restarts max(0, ceil(log2(2 R0^2 / eps))).
std::size_t restart_count(double R0_sq, double eps);

/// ceil((2 L Omega / mu) log2(R0^2 / eps)).
double restart_iteration_bound(double L, double omega, double mu, double R0_sq, double eps);

struct SaddleResult {
  Vector u_hat;
  Vector v_hat;
  SolverReport report;
  /// Sampled duality gap max_v f(u_hat, v) - min_u f(u, v_hat).
  std::optional<double> gap_estimate;
  /// 2 M^2 / (mu (N + 1)) for mirror descent, with M declared or observed.
  std::optional<double> gap_bound;
};

/// Runs the chosen method on the saddle operator and splits the result.
SaddleResult solve_saddle(const SaddleProblem& sp, const BregmanDivergence& div,
                          const std::variant<MirrorDescentConfig, RestartConfig>& method,
                          OperatorConstants constants = {}, std::size_t gap_samples = 1000,
                          std::uint64_t seed = 0);

}  // namespace bvi
