#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "bvi/divergence.hpp"
#include "bvi/feasible_set.hpp"
#include "bvi/operator.hpp"
#include "bvi/saddle.hpp"

namespace bvi {

/// max over a finite candidate set of <g(x), x_hat - x>. A lower bound on the
/// VI merit over Q unless `exact` is set.
struct GapEstimate {
  double value = 0.0;
  std::size_t candidate_count = 0;
  Vector argmax_witness;
  bool exact = false;
};

/// Uniform grid with `points_per_axis` nodes per coordinate over a bounded
/// set, restricted to Q.
struct GridCandidates {
  std::size_t points_per_axis = 0;
};
/// `count` samples from Q, drawn from the "diagnostics" stream of `seed`.
struct SampledCandidates {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};
/// Explicit list, projected onto Q. Set `exact` when the list is known to
/// contain the maximizer.
struct ExplicitCandidates {
  std::vector<Vector> points;
  bool exact = false;
};

using CandidateSpec = std::variant<GridCandidates, SampledCandidates, ExplicitCandidates>;

/// Candidate points for a spec, all inside Q. Throws InvalidArgument when the
/// set is empty or a grid is requested on an unbounded set.
std::vector<Vector> make_candidates(const FeasibleSet& q, const CandidateSpec& spec);

GapEstimate restricted_gap(const VIOperator& g, const FeasibleSet& q, const Vector& x_hat,
                           const CandidateSpec& candidates);

/// Box vertices (n <= 12), then `samples` points from Q, then the trace.
std::vector<Vector> default_candidates(const FeasibleSet& q, std::size_t samples, std::uint64_t seed,
                                       const std::vector<Vector>& trace = {});

/// Restricted gap with g evaluated once per candidate, for repeated queries.
class GapEvaluator {
 public:
  GapEvaluator(const VIOperator& g, const FeasibleSet& q, std::vector<Vector> candidates, bool exact = false);

  GapEstimate operator()(const Vector& x_hat) const;
  std::size_t size() const { return candidates_.size(); }

 private:
  Index dimension_;
  std::vector<Vector> candidates_;
  std::vector<Vector> values_;
  std::vector<double> offsets_;  // <g(c), c>
  bool exact_;
};

struct DistanceMetrics {
  double bregman = 0.0;     ///< V(x*, x_k)
  double squared_norm = 0.0;  ///< |x* - x_k|_2^2
};

std::vector<DistanceMetrics> distance_metrics(const BregmanDivergence& div, const Vector& x_star,
                                              const std::vector<Vector>& trace);

/// Least-squares slope of log(value) against log(N). Needs at least four
/// points with positive N and values.
double rate_fit(const std::vector<std::pair<double, double>>& trace);

struct SaddleGapEstimate {
  double value = 0.0;       ///< primal_max - dual_min
  double primal_max = 0.0;  ///< max_v f(u_hat, v) over candidates
  double dual_min = 0.0;    ///< min_u f(u, v_hat) over candidates
  Vector v_witness;
  Vector u_witness;
};

/// Sampled duality gap. Candidates: box vertices, `samples` draws from each
/// set, and the points u_hat, v_hat themselves, so the value is >= 0.
SaddleGapEstimate saddle_gap(const SaddleProblem& sp, const Vector& u_hat, const Vector& v_hat,
                             std::size_t samples, std::uint64_t seed);

/// |x* - x_N|^2 <= 4 M^2 / (mu (N + 1)), valid when the prox is 1-strongly
/// convex; nullopt otherwise.
std::optional<double> argument_bound(const BregmanDivergence& div, double M, double mu, std::size_t N);

}  // namespace bvi
