#include <doctest.h>

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bvi/checkers.hpp"
#include "bvi/divergence.hpp"
#include "bvi/errors.hpp"
#include "bvi/problems.hpp"
#include "bvi/saddle.hpp"
#include "support.hpp"

using namespace bvi;
using bvi::testing::fd_gradient;
using bvi::testing::normal_vector;
using bvi::testing::vec;

namespace {

VIOperator identity_operator(Index n) {
  return VIOperator(n, [](const Vector& x) -> Vector { return x; });
}

Matrix random_matrix(Rng& rng, Index n, double shift) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = 0.3 * rng.normal();
  }
  return m + shift * Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("power-norm problem") {
  CHECK(*make_power_norm_problem(1000, 2, 0.5).op.constants().mu == doctest::Approx(1.0 / 750.0).epsilon(1e-14));
  CHECK(*make_power_norm_problem(5, 2, 0.5).op.constants().mu == doctest::Approx(4.0 / 15.0).epsilon(1e-14));
  CHECK(*make_power_norm_problem(3, 3, 1.0).op.constants().mu ==
        doctest::Approx(2.0 / (5.0 * std::pow(std::sqrt(3.0), 3))).epsilon(1e-14));

  const Problem one = make_power_norm_problem(1, 2, 1.0);
  CHECK(one.op(vec({0.3}))[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(make_power_norm_problem(1, 4, 1.0).op(vec({0.3}))[0] == doctest::Approx(0.027).epsilon(1e-14));
  CHECK(*one.op.constants().M == 1.0);
  CHECK(one.prox.kind() == ProxFunction::Kind::Power);
  CHECK(one.prox.exponent() == 2.0);
  CHECK(*one.prox.omega() == doctest::Approx(0.5));

  for (int p : {2, 3, 4}) {
    for (Index n : {1, 4, 9}) {
      const Problem pr = make_power_norm_problem(n, p, 0.5);
      CHECK(pr.op(Vector::Zero(n)).norm() == 0.0);
      CHECK(pr.solution->norm() == 0.0);
      CHECK(pr.set.kind() == FeasibleSet::Kind::Box);
    }
  }

  Rng rng(3);
  const Problem pr = make_power_norm_problem(4, 3, 0.5);
  for (int s = 0; s < 20; ++s) {
    const Vector x = pr.set.sample(rng);
    CHECK((pr.op(x) - fd_gradient(pr.objective, x)).norm() <= 1e-7);
  }

  CHECK_THROWS_AS(make_power_norm_problem(0, 2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(make_power_norm_problem(3, 1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(make_power_norm_problem(3, 2, 0.0), InvalidArgument);
}

TEST_CASE("quartic problem") {
  const Matrix eye = Matrix::Identity(3, 3);
  const Problem pr = make_quartic_problem({eye, eye, eye, Vector::Zero(3), Vector::Zero(3)});
  CHECK(*pr.op.constants().L == doctest::Approx(7.0).epsilon(1e-13));
  CHECK(*pr.op.constants().mu == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  REQUIRE(pr.solution.has_value());
  CHECK(pr.solution->norm() == 0.0);
  CHECK(pr.op(Vector::Zero(3)).norm() == 0.0);
  CHECK(pr.prox.kind() == ProxFunction::Kind::Quartic);
  CHECK(pr.set.kind() == FeasibleSet::Kind::WholeSpace);

  Rng rng(11);
  const Index n = 4;
  QuarticData data{random_matrix(rng, n, 1.0), random_matrix(rng, n, 0.5), random_matrix(rng, n, 1.0),
                   normal_vector(rng, n), normal_vector(rng, n)};
  const Problem general = make_quartic_problem(data);
  CHECK_FALSE(general.solution.has_value());
  for (int s = 0; s < 25; ++s) {
    const Vector x = normal_vector(rng, n);
    const Vector g = general.op(x);
    const Vector fd = fd_gradient(general.objective, x, 1e-5);
    CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
  }

  // L formula with a nonzero b.
  const Vector b = vec({0.6, 0.8, 0.0});
  const Problem with_b = make_quartic_problem({eye, 2.0 * eye, eye, b, Vector::Zero(3)});
  CHECK(*with_b.op.constants().L == doctest::Approx(3.0 + 3.0 * 16.0 + 6.0 * 8.0 + 3.0 * 4.0 + 1.0));

  CHECK_THROWS_AS(make_quartic_problem({Matrix::Identity(3, 2), eye, eye, Vector::Zero(3), Vector::Zero(3)}),
                  InvalidArgument);
  CHECK_THROWS_AS(make_quartic_problem({eye, eye, eye, Vector::Zero(2), Vector::Zero(3)}), InvalidArgument);
  CHECK_THROWS_AS(make_quartic_problem({Matrix::Zero(3, 3), eye, eye, Vector::Zero(3), Vector::Zero(3)}),
                  InvalidArgument);
}

TEST_CASE("erm problem") {
  const ErmProblem half = make_erm_problem({.machines = 4, .dimension = 6, .delta = 0.5, .mu_base = 1.0, .seed = 1});
  CHECK(half.relative_strong_convexity == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.relative_smoothness == 1.0);

  for (Index m : {1, 4, 5}) {
    const ErmSpec spec{.machines = m, .dimension = 6, .delta = 0.2, .mu_base = 1.0, .seed = 7};
    const ErmProblem erm = make_erm_problem(spec);
    const Problem& pr = erm.problem;
    REQUIRE(erm.hessians.size() == static_cast<std::size_t>(m));

    Matrix mean = Matrix::Zero(6, 6);
    for (const auto& h : erm.hessians) mean += h;
    mean /= static_cast<double>(m);
    const Eigen::SelfAdjointEigenSolver<Matrix> mean_eig(mean);
    CHECK(mean_eig.eigenvalues()(0) >= 1.0 - 1e-10);
    for (const auto& h : erm.hessians) {
      const Eigen::SelfAdjointEigenSolver<Matrix> diff(h - mean);
      CHECK(diff.eigenvalues().cwiseAbs().maxCoeff() <= 0.2 + 1e-12);
    }

    CHECK(pr.op(*pr.solution).norm() <= 1e-10);
    const Vector x0 = vec({0.1, -0.2, 0.3, 0.0, 0.5, -1.0});
    CHECK((pr.op(x0) - fd_gradient(pr.objective, x0)).norm() <= 1e-6);

    // F(x) + <F'(x), y - x> + mu V(y, x) <= F(y) <= F(x) + <F'(x), y - x> + V(y, x)
    const BregmanDivergence div(pr.prox);
    Rng rng(99);
    double worst_upper = -1e300, worst_lower = -1e300;
    for (int s = 0; s < 10000; ++s) {
      const Vector x = normal_vector(rng, 6);
      const Vector y = normal_vector(rng, 6);
      const double lin = pr.objective(x) + pr.op(x).dot(y - x);
      const double v = div(y, x);
      worst_upper = std::max(worst_upper, pr.objective(y) - lin - v);
      worst_lower = std::max(worst_lower, lin + erm.relative_strong_convexity * v - pr.objective(y));
    }
    CHECK(worst_upper <= 1e-9);
    CHECK(worst_lower <= 1e-9);
  }

  const ErmSpec spec{.machines = 5, .dimension = 5, .delta = 0.3, .mu_base = 2.0, .seed = 4};
  const Problem a = make_erm_problem(spec).problem;
  const Problem b = make_erm_problem(spec).problem;
  CHECK((*a.solution - *b.solution).norm() == 0.0);

  CHECK_THROWS_AS(make_erm_problem({.machines = 3, .dimension = 4, .delta = 0.0}), InvalidArgument);
  CHECK_THROWS_AS(make_erm_problem({.machines = 3, .dimension = 4, .delta = 0.1, .mu_base = -1.0}),
                  InvalidArgument);
}

TEST_CASE("erm divergence in the small-delta limit") {
  const ErmProblem erm = make_erm_problem({.machines = 3, .dimension = 4, .delta = 1e-9, .mu_base = 1.0, .seed = 2});
  const BregmanDivergence div(erm.problem.prox);
  Matrix mean = Matrix::Zero(4, 4);
  for (const auto& h : erm.hessians) mean += h;
  mean /= 3.0;
  Rng rng(5);
  for (int s = 0; s < 50; ++s) {
    const Vector x = normal_vector(rng, 4);
    const Vector y = normal_vector(rng, 4);
    const double expected = 0.5 * (y - x).dot(mean * (y - x));
    CHECK(div(y, x) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("strong monotonicity checker") {
  const BregmanDivergence div(ProxFunction::euclidean(3));
  const FeasibleSet box = FeasibleSet::box(3, 1.0);
  const PropertyReport exact = check_relative_strong_monotonicity(identity_operator(3), div, 1.0, box, 2000, 1);
  CHECK(exact.worst_violation <= 1e-9);
  CHECK(exact.certified(1e-9));
  CHECK(exact.samples == 2000);
  CHECK(exact.witness.size() == 2);

  const PropertyReport tight = check_relative_strong_monotonicity(identity_operator(3), div, 2.0, box, 2000, 1);
  CHECK(tight.worst_violation > 0.0);
  REQUIRE(tight.witness.size() == 2);
  const Vector& x = tight.witness[0];
  const Vector& y = tight.witness[1];
  CHECK(tight.worst_violation == doctest::Approx(2.0 * div(y, x) + 2.0 * div(x, y) - (y - x).squaredNorm()));

  const Problem pr = make_power_norm_problem(5, 2, 0.5);
  const PropertyReport ex4 = check_relative_strong_monotonicity(pr.op, BregmanDivergence(pr.prox),
                                                                *pr.op.constants().mu, pr.set, 10000, 42);
  CHECK(ex4.worst_violation <= 1e-9);

  const PropertyReport again = check_relative_strong_monotonicity(pr.op, BregmanDivergence(pr.prox),
                                                                  *pr.op.constants().mu, pr.set, 10000, 42);
  CHECK(again.worst_violation == ex4.worst_violation);
}

TEST_CASE("boundedness checker") {
  const BregmanDivergence div(ProxFunction::euclidean(2));
  const VIOperator zero(2, [](const Vector& x) -> Vector { return Vector::Zero(x.size()); });
  for (double M : {1e-6, 1.0, 100.0}) {
    CHECK(check_relative_boundedness(zero, div, M, FeasibleSet::box(2, 1.0), 500, 3).certified());
  }

  const PropertyReport bad = check_relative_boundedness(identity_operator(2), div, 0.1, FeasibleSet::box(2, 1.0),
                                                        2000, 3);
  CHECK(bad.worst_violation > 0.0);
  REQUIRE(bad.witness.size() == 2);
  // Hand-checked corner pair x = (1, 1), y = -x: 4 - 0.1 * 2 sqrt(2).
  CHECK(bad.worst_violation <= 4.0 - 0.2 * std::sqrt(2.0) + 1e-12);
  const double corner = vec({1.0, 1.0}).dot(vec({2.0, 2.0})) - 0.1 * std::sqrt(2.0 * div(vec({-1, -1}), vec({1, 1})));
  CHECK(corner == doctest::Approx(4.0 - 0.2 * std::sqrt(2.0)));

  const Problem pr = make_power_norm_problem(5, 2, 0.5);
  CHECK(check_relative_boundedness(pr.op, BregmanDivergence(pr.prox), 1.0, pr.set, 10000, 8).worst_violation <=
        1e-9);
}

TEST_CASE("smoothness checker") {
  Rng rng(21);
  const Matrix b = random_matrix(rng, 3, 0.0);
  const Matrix a = b.transpose() * b;
  const double norm_a = Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues().maxCoeff();
  const VIOperator linear(3, [a](const Vector& x) -> Vector { return a * x; });
  const BregmanDivergence div(ProxFunction::euclidean(3));
  CHECK(check_relative_smoothness(linear, div, norm_a, FeasibleSet::whole_space(3), 5000, 4).worst_violation <=
        1e-9);

  const VIOperator constant(3, [](const Vector&) -> Vector { return vec({1.0, -2.0, 3.0}); });
  CHECK(check_relative_smoothness(constant, div, 1e-3, FeasibleSet::box(3, 2.0), 1000, 4).worst_violation <= 0.0);

  const Matrix eye = Matrix::Identity(4, 4);
  const Problem pr = make_quartic_problem({eye, eye, eye, Vector::Zero(4), Vector::Zero(4)});
  const BregmanDivergence qdiv(pr.prox);
  const PropertyReport ex3 = check_relative_smoothness(pr.op, qdiv, 7.0, pr.set, 10000, 5);
  CHECK(ex3.worst_violation <= 1e-9);
  CHECK(ex3.witness.size() == 3);
  CHECK(check_relative_strong_monotonicity(pr.op, qdiv, 1.0 / 3.0, pr.set, 10000, 5).worst_violation <= 1e-9);

  const PropertyReport too_small = check_relative_smoothness(pr.op, qdiv, 0.5, pr.set, 2000, 5);
  CHECK(too_small.worst_violation > 0.0);
}

TEST_CASE("checker argument validation") {
  const BregmanDivergence div(ProxFunction::euclidean(2));
  const FeasibleSet box = FeasibleSet::box(2, 1.0);
  CHECK_THROWS_AS(check_relative_strong_monotonicity(identity_operator(2), div, 0.0, box, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(check_relative_boundedness(identity_operator(2), div, 1.0, box, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(check_relative_smoothness(identity_operator(3), div, 1.0, box, 10, 1), InvalidArgument);
  for (Property p : {Property::RelativeStrongMonotonicity, Property::RelativeBoundedness,
                     Property::RelativeSmoothness}) {
    CHECK(property_from_string(to_string(p)) == p);
  }
  CHECK_THROWS_AS(property_from_string("rel-nonsense"), InvalidArgument);
}

TEST_CASE("built-in problems pass their own checkers") {
  ProblemParams params;
  params.n = 5;
  params.m = 5;
  params.seed = 17;
  for (const std::string& id : problem_ids()) {
    CAPTURE(id);
    const Problem pr = make_problem(id, params);
    const BregmanDivergence div(pr.prox);
    const auto& c = pr.op.constants();
    CHECK((c.mu || c.M || c.L));
    if (c.mu) CHECK(check_relative_strong_monotonicity(pr.op, div, *c.mu, pr.set, 10000, 1).worst_violation <= 1e-9);
    if (c.M) CHECK(check_relative_boundedness(pr.op, div, *c.M, pr.set, 10000, 2).worst_violation <= 1e-9);
    if (c.L) CHECK(check_relative_smoothness(pr.op, div, *c.L, pr.set, 10000, 3).worst_violation <= 1e-9);
    if (pr.solution) {
      // x* solves the VI: <g(x*), y - x*> >= 0 on Q.
      Rng rng(6);
      const Vector gs = pr.op(*pr.solution);
      CHECK(pr.set.contains(*pr.solution));
      for (int s = 0; s < 1000; ++s) CHECK(gs.dot(pr.set.sample(rng) - *pr.solution) >= -1e-9);
    }
  }
  CHECK(problem_ids().size() == 5);
  CHECK_THROWS_AS(make_problem("nope"), InvalidArgument);
}

TEST_CASE("inflated constants are falsified") {
  ProblemParams params;
  params.n = 5;
  params.m = 5;
  params.seed = 17;
  for (const std::string& id : problem_ids()) {
    CAPTURE(id);
    const Problem pr = make_problem(id, params);
    const BregmanDivergence div(pr.prox);
    const auto& c = pr.op.constants();
    if (c.mu && id != "quartic") {
      const auto r = check_relative_strong_monotonicity(pr.op, div, 2.0 * *c.mu, pr.set, 10000, 1);
      CHECK(r.worst_violation > 0.0);
      CHECK(r.witness.size() == 2);
    }
    if (c.M) CHECK(check_relative_boundedness(pr.op, div, 0.5 * *c.M, pr.set, 10000, 1).worst_violation > 0.0);
    if (c.L && id != "quartic") {
      CHECK(check_relative_smoothness(pr.op, div, 0.5 * *c.L, pr.set, 10000, 1).worst_violation > 0.0);
    }
  }
}

TEST_CASE("quartic declared constants are conservative") {
  // With E = A = C = I the Hessian gap f'' - d'' = 3 diag(x^2) is PSD and
  // vanishes at 0, so the exact relative constant is 1, three times the
  // declared 1/3. Likewise f'' <= 2 d'', well below the declared L = 7.
  const Problem pr = make_problem("quartic", {.n = 5});
  const BregmanDivergence div(pr.prox);
  CHECK(*pr.op.constants().mu == doctest::Approx(1.0 / 3.0));
  CHECK(check_relative_strong_monotonicity(pr.op, div, 1.0, pr.set, 10000, 1).worst_violation <= 1e-9);
  CHECK(check_relative_strong_monotonicity(pr.op, div, 1.05, pr.set, 10000, 1).worst_violation > 0.0);
  CHECK(check_relative_smoothness(pr.op, div, 3.5, pr.set, 10000, 1).worst_violation <= 1e-9);
}

TEST_CASE("call counting") {
  const VIOperator g = identity_operator(2);
  CHECK(g.call_count() == 0);
  for (int i = 0; i < 17; ++i) g(Vector::Zero(2));
  CHECK(g.call_count() == 17);

  const VIOperator copy = g;
  copy(Vector::Ones(2));
  CHECK(g.call_count() == 18);
  const VIOperator relabelled = g.with_constants({.mu = 1.0});
  relabelled(Vector::Ones(2));
  CHECK(g.call_count() == 19);
  CHECK(*relabelled.constants().mu == 1.0);

  const Problem pr = make_power_norm_problem(3, 2, 0.5);
  check_relative_smoothness(pr.op, BregmanDivergence(pr.prox), 10.0, pr.set, 100, 1);
  CHECK(pr.op.call_count() == 200);
  check_relative_boundedness(pr.op, BregmanDivergence(pr.prox), 10.0, pr.set, 100, 1);
  CHECK(pr.op.call_count() == 300);

  CHECK_THROWS_AS(g(Vector::Zero(3)), InvalidArgument);
  const VIOperator broken(1, [](const Vector&) -> Vector { return Vector::Constant(1, NAN); });
  CHECK_THROWS_AS(broken(Vector::Zero(1)), NumericalFailure);
  const VIOperator wrong_size(1, [](const Vector&) -> Vector { return Vector::Zero(2); });
  CHECK_THROWS_AS(wrong_size(Vector::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(VIOperator(0, [](const Vector& x) -> Vector { return x; }), InvalidArgument);
  CHECK_THROWS_AS(VIOperator(1, [](const Vector& x) -> Vector { return x; }, {.mu = -1.0}), InvalidArgument);
}

TEST_CASE("saddle operator") {
  const Problem bil = make_bilinear_problem();
  REQUIRE(bil.saddle.has_value());
  CHECK((bil.op(vec({0.3, -0.7})) - vec({-0.7, -0.3})).norm() == 0.0);
  CHECK(bil.op(Vector::Zero(2)).norm() == 0.0);
  Rng rng(8);
  for (int s = 0; s < 1000; ++s) {
    const Vector x = bil.set.sample(rng);
    const Vector y = bil.set.sample(rng);
    CHECK(std::abs((bil.op(x) - bil.op(y)).dot(x - y)) <= 1e-12);
  }

  // Convex-concave f(u, v) = u^2 - v^2 + u v on [-1, 1]^2.
  SaddleProblem sp{
      .value = [](const Vector& u, const Vector& v) { return u[0] * u[0] - v[0] * v[0] + u[0] * v[0]; },
      .grad_u = [](const Vector& u, const Vector& v) -> Vector { return vec({2.0 * u[0] + v[0]}); },
      .grad_v = [](const Vector& u, const Vector& v) -> Vector { return vec({-2.0 * v[0] + u[0]}); },
      .primal_set = FeasibleSet::box(1, 1.0),
      .dual_set = FeasibleSet::box(1, 1.0),
  };
  auto [g, q] = saddle_operator(sp);
  CHECK(q.dimension() == 2);
  double worst_gap = -1e300, worst_mono = 1e300;
  for (int s = 0; s < 10000; ++s) {
    const Vector x = q.sample(rng);
    const Vector y = q.sample(rng);
    auto [u, v] = split_saddle_point(sp, x);
    auto [z, t] = split_saddle_point(sp, y);
    // <g(x), x - y> >= f(u, t) - f(z, v)
    worst_gap = std::max(worst_gap, sp.value(u, t) - sp.value(z, v) - g(x).dot(x - y));
    worst_mono = std::min(worst_mono, (g(x) - g(y)).dot(x - y));
  }
  CHECK(worst_gap <= 1e-9);
  CHECK(worst_mono >= -1e-9);
}

TEST_CASE("lagrangian saddle") {
  ScalarFunction f{
      .value = [](const Vector& x) { return x.squaredNorm(); },
      .gradient = [](const Vector& x) -> Vector { return 2.0 * x; },
  };
  ScalarFunction inactive{
      .value = [](const Vector&) { return -1.0; },
      .gradient = [](const Vector& x) -> Vector { return Vector::Zero(x.size()); },
  };
  const double eps = 1e-3;
  const SaddleProblem sp = make_lagrangian_saddle(f, {inactive}, eps, FeasibleSet::box(1, 1.0));
  CHECK(sp.dual_set.kind() == FeasibleSet::Kind::Orthant);
  CHECK(sp.dual_dimension() == 1);
  // dL/dl = -1 - 2 eps l < 0 on l >= 0, so l* = 0.
  for (double l : {0.0, 0.5, 3.0, 100.0}) CHECK(sp.grad_v(vec({0.2}), vec({l}))[0] < 0.0);

  const double h = 1e-2;
  for (double l : {0.5, 2.0, 10.0}) {
    const Vector x = vec({0.3});
    const double second = (sp.value(x, vec({l + h})) - 2.0 * sp.value(x, vec({l})) + sp.value(x, vec({l - h}))) / (h * h);
    CHECK(second <= -2.0 * eps + 1e-9);
    CHECK(second == doctest::Approx(-2.0 * eps).epsilon(1e-4));
  }
  const Vector gu = sp.grad_u(vec({0.3}), vec({2.0}));
  CHECK(gu[0] == doctest::Approx(0.6));

  CHECK_THROWS_AS(make_lagrangian_saddle(f, {inactive}, 0.0, FeasibleSet::box(1, 1.0)), InvalidArgument);

  const Problem toy = make_lagrangian_toy(eps);
  CHECK(*toy.op.constants().mu == doctest::Approx(2.0 * eps));
  CHECK(toy.prox.kind() == ProxFunction::Kind::Composite);
  CHECK(toy.set.kind() == FeasibleSet::Kind::Product);
  const Vector g0 = toy.op(Vector::Zero(2));
  CHECK(g0[0] == doctest::Approx(0.0));
  CHECK(g0[1] == doctest::Approx(0.5));
}
