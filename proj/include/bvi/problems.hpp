#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bvi/feasible_set.hpp"
#include "bvi/operator.hpp"
#include "bvi/prox.hpp"
#include "bvi/saddle.hpp"

namespace bvi {

/// An operator together with the geometry it is analysed in.
struct Problem {
  std::string id;
  VIOperator op;
  ProxFunction prox;
  FeasibleSet set;
  /// Known solution x*, when available.
  std::optional<Vector> solution;
  /// Potential f with g = grad f, when the operator is a gradient.
  std::function<double(const Vector&)> objective;
  /// Underlying saddle problem for saddle-derived operators.
  std::optional<SaddleProblem> saddle;
};

/// g(x) = |x|^(p-2) x on [-alpha, alpha]^n with d = |x|^(2p)/(2p).
/// mu = (p-1) / ((2p-1) (sqrt(n) alpha)^p), M = 1, x* = 0.
Problem make_power_norm_problem(Index n, int p, double alpha);

struct QuarticData {
  Matrix E, A, C;
  Vector b, d;
};

/// g = grad of |Ex|^4/4 + |Ax - b|_4^4/4 + |Cx - d|^2/2 on R^n with the
/// quartic prox. L = 3|E|^4 + 3|A|^4 + 6|A|^3|b| + 3|A|^2|b|^2 + |C|^2,
/// mu = min(s_E^4 / 3, s_C^2) with s the smallest singular value.
Problem make_quartic_problem(const QuarticData& data);

struct ErmSpec {
  Index machines = 5;  ///< m
  Index dimension = 8;
  double delta = 0.1;
  double mu_base = 1.0;
  std::uint64_t seed = 0;
};

/// Empirical risk F = (1/m) sum_j f_j with quadratic f_j that are
/// delta-similar, and prox d = f_1 + (delta/2)|x|^2. F is relatively
/// 1-smooth and relatively mu/(mu + 2 delta)-strongly convex w.r.t. d.
struct ErmProblem {
  Problem problem;
  double relative_smoothness = 1.0;
  double relative_strong_convexity = 0.0;
  std::vector<Matrix> hessians;
  std::vector<Vector> linear_terms;
};

ErmProblem make_erm_problem(const ErmSpec& spec);

/// Toy Lagrangian saddle: f(x) = x^2 on [-1, 1], g_1(x) = x - 0.5, eps.
Problem make_lagrangian_toy(double eps = 1e-3);

/// f(u, v) = u v on [-1, 1]^2.
Problem make_bilinear_problem();

/// Parameters of the string-addressable problem zoo.
struct ProblemParams {
  Index n = 5;
  int p = 2;
  double alpha = 0.5;
  Index m = 5;
  double delta = 0.1;
  double mu_base = 1.0;
  double eps = 1e-3;
  std::uint64_t seed = 0;
  std::optional<QuarticData> quartic;  ///< defaults to E = A = C = I, b = d = 0
};

/// "power-norm", "quartic", "erm", "lagrangian-toy", "bilinear".
Problem make_problem(std::string_view id, const ProblemParams& params = {});
const std::vector<std::string>& problem_ids();

}  // namespace bvi
