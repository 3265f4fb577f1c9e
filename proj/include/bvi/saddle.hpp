#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "bvi/feasible_set.hpp"
#include "bvi/operator.hpp"

namespace bvi {

/// min_{u in Q1} max_{v in Q2} f(u, v) with partial gradient oracles.
struct SaddleProblem {
  std::function<double(const Vector&, const Vector&)> value;
  std::function<Vector(const Vector&, const Vector&)> grad_u;
  std::function<Vector(const Vector&, const Vector&)> grad_v;
  FeasibleSet primal_set;
  FeasibleSet dual_set;

  Index primal_dimension() const { return primal_set.dimension(); }
  Index dual_dimension() const { return dual_set.dimension(); }
};

/// Monotone operator g(u, v) = (f'_u(u, v); -f'_v(u, v)) on Q1 x Q2.
std::pair<VIOperator, FeasibleSet> saddle_operator(const SaddleProblem& sp, OperatorConstants constants = {});

/// Splits a stacked point x = (u, v).
std::pair<Vector, Vector> split_saddle_point(const SaddleProblem& sp, const Vector& x);

/// Scalar function with gradient, used for objectives and constraints.
struct ScalarFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

/// Regularized Lagrangian saddle problem
///   L(x, l) = f(x) + sum_p l_p g_p(x) - eps sum_p l_p^2,  x in Q, l >= 0.
/// Pair it with composite_divergence({V, 1}, {euclidean(m), 1}).
SaddleProblem make_lagrangian_saddle(ScalarFunction objective, std::vector<ScalarFunction> constraints, double eps,
                                     FeasibleSet q);

}  // namespace bvi
