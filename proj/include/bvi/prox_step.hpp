#pragma once

#include "bvi/feasible_set.hpp"
#include "bvi/prox.hpp"

namespace bvi {

struct ProxOptions {
  /// Bound on the first-order optimality residual (see prox_residual).
  double tolerance = 1e-8;
  /// Iteration budget of the projected-gradient fallback.
  int max_inner_iterations = 200000;
};

/// Prox-mapping step
///   argmin_{x in Q} <c, x> + V(x, z)
/// Closed forms are used where the (prox, set) pair admits one; everything
/// else goes through a projected-gradient solve to `opts.tolerance`.
/// Throws NumericalFailure if that solve runs out of iterations.
Vector prox_step(const ProxFunction& d, const FeasibleSet& q, const Vector& z, const Vector& c,
                 const ProxOptions& opts = {});

/// argmin_{x in Q} d(x) - <y, x>. `start` seeds the iterative fallback.
Vector linear_prox(const ProxFunction& d, const FeasibleSet& q, const Vector& y, const Vector& start,
                   const ProxOptions& opts = {});

/// First-order residual of a prox step candidate: the largest rate
/// -<c + grad d(x) - grad d(z), u - x> / |u - x| over u in Q.
double prox_residual(const ProxFunction& d, const FeasibleSet& q, const Vector& z, const Vector& c,
                     const Vector& x);

/// argmin over [-alpha, alpha]^n of |x|^(2p)/(2p) - <y, x>.
/// Uses x_i(s) = clip(y_i / s^(2p-2), -alpha, alpha) and bisects for the
/// unique s with s = |x(s)| on (0, sqrt(n) alpha].
Vector box_power_prox_solve(double p, double alpha, const Vector& y);

}  // namespace bvi
