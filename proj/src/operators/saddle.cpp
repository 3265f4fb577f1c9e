#include "bvi/saddle.hpp"

#include "bvi/errors.hpp"

namespace bvi {

std::pair<VIOperator, FeasibleSet> saddle_operator(const SaddleProblem& sp, OperatorConstants constants) {
  if (!sp.grad_u || !sp.grad_v) throw InvalidArgument("saddle_operator: missing partial gradients");
  const Index nu = sp.primal_dimension();
  const Index nv = sp.dual_dimension();
  auto eval = [sp, nu, nv](const Vector& x) -> Vector {
    const Vector u = x.head(nu);
    const Vector v = x.tail(nv);
    Vector g(nu + nv);
    g.head(nu) = sp.grad_u(u, v);
    g.tail(nv) = -sp.grad_v(u, v);
    return g;
  };
  return {VIOperator(nu + nv, std::move(eval), constants), FeasibleSet::product({sp.primal_set, sp.dual_set})};
}

std::pair<Vector, Vector> split_saddle_point(const SaddleProblem& sp, const Vector& x) {
  require_dimension(x, sp.primal_dimension() + sp.dual_dimension(), "split_saddle_point");
  return {x.head(sp.primal_dimension()), x.tail(sp.dual_dimension())};
}

SaddleProblem make_lagrangian_saddle(ScalarFunction objective, std::vector<ScalarFunction> constraints, double eps,
                                     FeasibleSet q) {
  if (!(eps > 0.0)) throw InvalidArgument("make_lagrangian_saddle: eps must be positive");
  if (constraints.empty()) throw InvalidArgument("make_lagrangian_saddle: needs at least one constraint");
  const auto m = static_cast<Index>(constraints.size());

  SaddleProblem sp{
      .value =
          [objective, constraints, eps](const Vector& x, const Vector& lambda) {
            double v = objective.value(x);
            for (std::size_t p = 0; p < constraints.size(); ++p) {
              const double l = lambda[static_cast<Index>(p)];
              v += l * constraints[p].value(x) - eps * l * l;
            }
            return v;
          },
      .grad_u =
          [objective, constraints](const Vector& x, const Vector& lambda) -> Vector {
            Vector g = objective.gradient(x);
            for (std::size_t p = 0; p < constraints.size(); ++p) {
              g += lambda[static_cast<Index>(p)] * constraints[p].gradient(x);
            }
            return g;
          },
      .grad_v =
          [constraints, eps, m](const Vector& x, const Vector& lambda) -> Vector {
            Vector g(m);
            for (Index p = 0; p < m; ++p) g[p] = constraints[static_cast<std::size_t>(p)].value(x) - 2.0 * eps * lambda[p];
            return g;
          },
      .primal_set = std::move(q),
      .dual_set = FeasibleSet::orthant(m),
  };
  return sp;
}

}  // namespace bvi
