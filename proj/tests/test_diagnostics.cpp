#include <doctest.h>

#include <cmath>

#include "bvi/diagnostics.hpp"
#include "bvi/errors.hpp"
#include "bvi/problems.hpp"
#include "support.hpp"

using namespace bvi;
using bvi::testing::normal_vector;
using bvi::testing::vec;

namespace {

VIOperator identity_operator(Index n) {
  return VIOperator(n, [](const Vector& x) -> Vector { return x; });
}

}  // namespace

TEST_CASE("restricted gap examples") {
  const FeasibleSet q = FeasibleSet::box(1, 1.0);
  const VIOperator g = identity_operator(1);

  // max over x of x (0.1 - x) is attained at x = 0.05 with value 0.0025.
  const GapEstimate grid = restricted_gap(g, q, vec({0.1}), GridCandidates{41});
  CHECK(grid.value == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(grid.argmax_witness[0] == doctest::Approx(0.05));
  CHECK(grid.candidate_count == 41);
  CHECK_FALSE(grid.exact);

  const GapEstimate self = restricted_gap(g, q, vec({0.1}), ExplicitCandidates{{vec({0.1})}});
  CHECK(self.value == 0.0);
  CHECK(self.candidate_count == 1);

  const GapEstimate at_star = restricted_gap(g, q, vec({0.0}), SampledCandidates{500, 3});
  CHECK(at_star.value <= 0.0);

  // Candidates outside Q are projected.
  const GapEstimate projected = restricted_gap(g, q, vec({0.5}), ExplicitCandidates{{vec({5.0})}, true});
  CHECK(projected.argmax_witness[0] == 1.0);
  CHECK(projected.value == doctest::Approx(-0.5));
  CHECK(projected.exact);

  CHECK_THROWS_AS(restricted_gap(g, q, vec({0.1}), ExplicitCandidates{}), InvalidArgument);
  CHECK_THROWS_AS(restricted_gap(g, q, vec({0.1}), SampledCandidates{0, 1}), InvalidArgument);
  CHECK_THROWS_AS(restricted_gap(g, FeasibleSet::whole_space(1), vec({0.1}), GridCandidates{5}), InvalidArgument);
}

TEST_CASE("restricted gap invariants") {
  const Problem pr = make_power_norm_problem(4, 2, 0.5);
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x_hat = pr.set.sample(rng);
    const auto small = default_candidates(pr.set, 100, 7);
    auto large = small;
    const auto extra = make_candidates(pr.set, SampledCandidates{400, 8});
    large.insert(large.end(), extra.begin(), extra.end());
    const GapEvaluator a(pr.op, pr.set, small);
    const GapEvaluator b(pr.op, pr.set, large);
    CHECK(b(x_hat).value >= a(x_hat).value);
    CHECK(a(*pr.solution).value <= 0.0);
    CHECK(b(*pr.solution).value <= 0.0);
  }

  // default candidates: 16 vertices, then samples, then the trace.
  const std::vector<Vector> trace{vec({0.1, 0.1, 0.1, 0.1}), vec({9.0, 0.0, 0.0, 0.0})};
  const auto c = default_candidates(pr.set, 10, 1, trace);
  REQUIRE(c.size() == 16 + 10 + 2);
  CHECK(c.back()[0] == 0.5);
  for (const auto& p : c) CHECK(pr.set.contains(p));

  // Ties go to the first candidate.
  const GapEstimate tie = restricted_gap(identity_operator(1), FeasibleSet::box(1, 1.0), vec({0.0}),
                                         ExplicitCandidates{{vec({0.5}), vec({-0.5})}});
  CHECK(tie.argmax_witness[0] == 0.5);
}

TEST_CASE("distance metrics") {
  const Vector x_star = vec({0.2, -0.1, 0.4});
  const std::vector<Vector> constant(5, x_star);
  for (const auto& m : distance_metrics(BregmanDivergence(ProxFunction::quartic(3)), x_star, constant)) {
    CHECK(m.bregman == 0.0);
    CHECK(m.squared_norm == 0.0);
  }

  Rng rng(4);
  std::vector<Vector> trace;
  for (int i = 0; i < 50; ++i) trace.push_back(normal_vector(rng, 3));
  for (const auto& m : distance_metrics(BregmanDivergence(ProxFunction::euclidean(3)), x_star, trace)) {
    CHECK(m.squared_norm == 2.0 * m.bregman);
  }

  // Quartic divergence against a direct evaluation of the definition.
  auto d = [](const Vector& x) { return 0.25 * std::pow(x.squaredNorm(), 2) + 0.5 * x.squaredNorm(); };
  const auto rows = distance_metrics(BregmanDivergence(ProxFunction::quartic(3)), x_star, trace);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Vector& x = trace[i];
    const Vector grad = (x.squaredNorm() + 1.0) * x;
    const double direct = d(x_star) - d(x) - grad.dot(x_star - x);
    CHECK(rows[i].bregman == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("rate fit") {
  std::vector<std::pair<double, double>> inv, inv_sq;
  for (double N : {10.0, 31.0, 100.0, 316.0, 1000.0}) {
    inv.emplace_back(N, 3.7 / N);
    inv_sq.emplace_back(N, 0.2 / (N * N));
  }
  CHECK(std::abs(rate_fit(inv) + 1.0) <= 1e-12);
  CHECK(std::abs(rate_fit(inv_sq) + 2.0) <= 1e-12);

  auto bad = inv;
  bad[2].second = -1e-3;
  CHECK_THROWS_AS(rate_fit(bad), InvalidArgument);
  bad[2].second = 0.0;
  CHECK_THROWS_AS(rate_fit(bad), InvalidArgument);
  CHECK_THROWS_AS(rate_fit({{1.0, 1.0}, {2.0, 0.5}, {3.0, 0.3}}), InvalidArgument);
}

TEST_CASE("saddle gap and argument bound") {
  const Problem bil = make_bilinear_problem();
  const SaddleGapEstimate at_star = saddle_gap(*bil.saddle, vec({0.0}), vec({0.0}), 200, 1);
  CHECK(at_star.value == 0.0);
  // f = u v: max_v f(0.5, v) = 0.5 at v = 1, min_u f(u, -0.5) = -0.5 at u = 1.
  const SaddleGapEstimate off = saddle_gap(*bil.saddle, vec({0.5}), vec({-0.5}), 200, 1);
  CHECK(off.value == doctest::Approx(1.0));
  CHECK(off.v_witness[0] == 1.0);
  CHECK(off.u_witness[0] == 1.0);

  CHECK(*argument_bound(BregmanDivergence(ProxFunction::euclidean(2)), 1.0, 2.0, 9) == doctest::Approx(0.2));
  CHECK_FALSE(argument_bound(BregmanDivergence(ProxFunction::power(2, 2.0)), 1.0, 2.0, 9).has_value());
}
