#include "bvi/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "bvi/errors.hpp"
#include "bvi/random.hpp"

namespace bvi {

namespace {

constexpr double kMaxGridPoints = 1e6;

std::vector<Vector> grid_points(const FeasibleSet& q, std::size_t per_axis) {
  if (per_axis < 2) throw InvalidArgument("grid candidates: need at least two points per axis");
  const Index n = q.dimension();
  if (std::pow(static_cast<double>(per_axis), static_cast<double>(n)) > kMaxGridPoints) {
    throw InvalidArgument(fmt::format("grid candidates: {}^{} points exceed the limit", per_axis, n));
  }
  auto [lo, hi] = q.bounds();
  if (!lo.allFinite() || !hi.allFinite()) throw InvalidArgument("grid candidates: set is unbounded");

  std::vector<Vector> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  const double steps = static_cast<double>(per_axis - 1);
  for (;;) {
    Vector p(n);
    for (Index i = 0; i < n; ++i) {
      const double t = static_cast<double>(idx[static_cast<std::size_t>(i)]) / steps;
      p[i] = lo[i] + t * (hi[i] - lo[i]);
    }
    if (q.contains(p, 1e-12)) out.push_back(q.project(p));
    Index i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

std::vector<Vector> make_candidates(const FeasibleSet& q, const CandidateSpec& spec) {
  std::vector<Vector> out;
  if (const auto* grid = std::get_if<GridCandidates>(&spec)) {
    out = grid_points(q, grid->points_per_axis);
  } else if (const auto* sampled = std::get_if<SampledCandidates>(&spec)) {
    Rng rng = Rng::stream(sampled->seed, "diagnostics");
    out.reserve(sampled->count);
    for (std::size_t s = 0; s < sampled->count; ++s) out.push_back(q.sample(rng));
  } else {
    const auto& list = std::get<ExplicitCandidates>(spec).points;
    out.reserve(list.size());
    for (const auto& p : list) {
      require_dimension(p, q.dimension(), "candidate");
      out.push_back(q.project(p));
    }
  }
  if (out.empty()) throw InvalidArgument("restricted gap: empty candidate set");
  return out;
}

GapEstimate restricted_gap(const VIOperator& g, const FeasibleSet& q, const Vector& x_hat,
                           const CandidateSpec& candidates) {
  const auto* list = std::get_if<ExplicitCandidates>(&candidates);
  const GapEvaluator eval(g, q, make_candidates(q, candidates), list && list->exact);
  return eval(x_hat);
}

std::vector<Vector> default_candidates(const FeasibleSet& q, std::size_t samples, std::uint64_t seed,
                                       const std::vector<Vector>& trace) {
  std::vector<Vector> out = q.vertices(12);
  if (samples > 0) {
    std::vector<Vector> drawn = make_candidates(q, SampledCandidates{samples, seed});
    out.insert(out.end(), drawn.begin(), drawn.end());
  }
  for (const auto& p : trace) out.push_back(q.project(p));
  if (out.empty()) throw InvalidArgument("default candidates: empty candidate set");
  return out;
}

GapEvaluator::GapEvaluator(const VIOperator& g, const FeasibleSet& q, std::vector<Vector> candidates, bool exact)
    : dimension_(q.dimension()), candidates_(std::move(candidates)), exact_(exact) {
  if (candidates_.empty()) throw InvalidArgument("restricted gap: empty candidate set");
  if (g.dimension() != dimension_) throw InvalidArgument("restricted gap: operator and set dimensions differ");
  values_.reserve(candidates_.size());
  offsets_.reserve(candidates_.size());
  for (const auto& c : candidates_) {
    require_dimension(c, dimension_, "candidate");
    values_.push_back(g(c));
    offsets_.push_back(values_.back().dot(c));
  }
}

GapEstimate GapEvaluator::operator()(const Vector& x_hat) const {
  require_dimension(x_hat, dimension_, "restricted gap x_hat");
  GapEstimate out;
  out.value = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const double v = values_[i].dot(x_hat) - offsets_[i];
    if (v > out.value) {
      out.value = v;
      best = i;
    }
  }
  out.candidate_count = candidates_.size();
  out.argmax_witness = candidates_[best];
  out.exact = exact_;
  return out;
}

std::vector<DistanceMetrics> distance_metrics(const BregmanDivergence& div, const Vector& x_star,
                                              const std::vector<Vector>& trace) {
  require_dimension(x_star, div.dimension(), "distance_metrics x_star");
  std::vector<DistanceMetrics> out;
  out.reserve(trace.size());
  for (const auto& x : trace) out.push_back({div(x_star, x), (x_star - x).squaredNorm()});
  return out;
}

double rate_fit(const std::vector<std::pair<double, double>>& trace) {
  if (trace.size() < 4) throw InvalidArgument("rate_fit: needs at least four points");
  double sx = 0.0, sy = 0.0;
  std::vector<std::pair<double, double>> logs;
  logs.reserve(trace.size());
  for (const auto& [N, v] : trace) {
    if (!(N > 0.0) || !(v > 0.0) || !std::isfinite(N) || !std::isfinite(v)) {
      throw InvalidArgument(fmt::format("rate_fit: nonpositive or non-finite point ({}, {})", N, v));
    }
    logs.emplace_back(std::log(N), std::log(v));
    sx += logs.back().first;
    sy += logs.back().second;
  }
  const double m = static_cast<double>(logs.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("rate_fit: all N are equal");
  return sxy / sxx;
}

SaddleGapEstimate saddle_gap(const SaddleProblem& sp, const Vector& u_hat, const Vector& v_hat,
                             std::size_t samples, std::uint64_t seed) {
  if (!sp.value) throw InvalidArgument("saddle_gap: saddle problem has no value oracle");
  require_dimension(u_hat, sp.primal_dimension(), "saddle_gap u_hat");
  require_dimension(v_hat, sp.dual_dimension(), "saddle_gap v_hat");
  Rng rng = Rng::stream(seed, "diagnostics");

  auto candidates = [&](const FeasibleSet& q, const Vector& self) {
    std::vector<Vector> out = q.vertices(12);
    for (std::size_t s = 0; s < samples; ++s) out.push_back(q.sample(rng));
    out.push_back(self);
    return out;
  };

  SaddleGapEstimate est;
  est.primal_max = -std::numeric_limits<double>::infinity();
  for (const auto& v : candidates(sp.dual_set, v_hat)) {
    const double f = sp.value(u_hat, v);
    if (f > est.primal_max) {
      est.primal_max = f;
      est.v_witness = v;
    }
  }
  est.dual_min = std::numeric_limits<double>::infinity();
  for (const auto& u : candidates(sp.primal_set, u_hat)) {
    const double f = sp.value(u, v_hat);
    if (f < est.dual_min) {
      est.dual_min = f;
      est.u_witness = u;
    }
  }
  est.value = est.primal_max - est.dual_min;
  return est;
}

std::optional<double> argument_bound(const BregmanDivergence& div, double M, double mu, std::size_t N) {
  if (!(M > 0.0) || !(mu > 0.0)) throw InvalidArgument("argument_bound: M and mu must be positive");
  const auto sigma = div.prox().strong_convexity();
  if (!sigma || *sigma < 1.0) return std::nullopt;
  return 4.0 * M * M / (mu * static_cast<double>(N + 1));
}

}  // namespace bvi
