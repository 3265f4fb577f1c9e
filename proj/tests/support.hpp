#pragma once

// Test-only oracles: brute-force grids and finite differences. Nothing here
// calls into the solver paths it is used to check.

#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "bvi/prox.hpp"
#include "bvi/random.hpp"
#include "bvi/types.hpp"

namespace bvi::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

struct GridMin {
  Vector argmin;
  double value = std::numeric_limits<double>::infinity();
};

/// Exhaustive minimum of f over the grid lo + k*h on [lo, hi]^2, restricted
/// to points accepted by `feasible`.
inline GridMin grid_min_2d(const std::function<double(const Vector&)>& f, const Vector& lo, const Vector& hi,
                           double h, const std::function<bool(const Vector&)>& feasible) {
  GridMin best;
  best.argmin = Vector::Zero(2);
  const int na = static_cast<int>(std::floor((hi[0] - lo[0]) / h + 1e-9)) + 1;
  const int nb = static_cast<int>(std::floor((hi[1] - lo[1]) / h + 1e-9)) + 1;
  Vector p(2);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      p << lo[0] + i * h, lo[1] + j * h;
      if (!feasible(p)) continue;
      const double v = f(p);
      if (v < best.value) {
        best.value = v;
        best.argmin = p;
      }
    }
  }
  return best;
}

/// Central finite-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    const double step = h * std::max(1.0, std::abs(x[i]));
    xp[i] += step;
    xm[i] -= step;
    g[i] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

inline Vector normal_vector(Rng& rng, Index n, double scale = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

inline double relative_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

inline ProxFunction custom_exp_prox(Index n) {
  ProxFunction::CustomSpec spec;
  spec.dimension = n;
  spec.value = [](const Vector& x) { return x.array().exp().sum() + 0.5 * x.squaredNorm(); };
  spec.gradient = [](const Vector& x) -> Vector { return x.array().exp().matrix() + x; };
  return ProxFunction::custom(spec);
}

struct NamedProx {
  std::string name;
  ProxFunction prox;
};

/// One instance of every prox kind.
inline std::vector<NamedProx> prox_zoo(Index n) {
  std::vector<NamedProx> out;
  out.push_back({"euclidean", ProxFunction::euclidean(n)});
  out.push_back({"power-1.5", ProxFunction::power(n, 1.5)});
  out.push_back({"power-2", ProxFunction::power(n, 2.0)});
  out.push_back({"power-3", ProxFunction::power(n, 3.0)});
  out.push_back({"quartic", ProxFunction::quartic(n)});
  Vector center = Vector::LinSpaced(n, -0.3, 0.2);
  out.push_back({"shifted-power-2", ProxFunction::shifted_scaled(ProxFunction::power(n, 2.0), center, 0.7)});
  if (n >= 2) {
    out.push_back({"composite", ProxFunction::composite({{ProxFunction::power(n - 1, 2.0), 2.0},
                                                         {ProxFunction::euclidean(1), 1.0}})});
  }
  out.push_back({"custom-exp", custom_exp_prox(n)});
  return out;
}

}  // namespace bvi::testing
