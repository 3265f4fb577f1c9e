#include "bvi/prox_step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "bvi/errors.hpp"

namespace bvi {

namespace {

// argmin over [-alpha, alpha]^n of d(x) - <y, x> for radial d with
// grad d(x) = phi(|x|) x. For fixed s = |x| the problem separates into
// x_i = clip(y_i / phi(s)); s is the fixed point of s -> |x(s)|, which is
// unique because |x(s)| is nonincreasing.
Vector radial_box_solve(const ProxFunction& d, double alpha, const Vector& y) {
  const Index n = y.size();
  if (y.isZero(0.0)) return Vector::Zero(n);
  if (d.kind() == ProxFunction::Kind::Euclidean) return y.cwiseMax(-alpha).cwiseMin(alpha);

  auto point_at = [&](double s) {
    const double phi = d.radial_factor(s);
    Vector x(n);
    for (Index i = 0; i < n; ++i) {
      if (phi > 0.0) {
        x[i] = std::clamp(y[i] / phi, -alpha, alpha);
      } else {
        x[i] = y[i] > 0.0 ? alpha : (y[i] < 0.0 ? -alpha : 0.0);
      }
    }
    return x;
  };

  double lo = 0.0;
  double hi = std::sqrt(static_cast<double>(n)) * alpha;
  double f_lo = lo - point_at(lo).norm();
  double f_hi = hi - point_at(hi).norm();
  // Every coordinate saturated: |x(hi)| equals hi up to rounding.
  if (f_hi <= 0.0) return point_at(hi);
  if (f_lo >= 0.0) {
    throw NumericalFailure("radial box prox: fixed point not bracketed", f_lo);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = mid - point_at(mid).norm();
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return point_at(std::abs(f_lo) < std::abs(f_hi) ? lo : hi);
}

Vector radial_ball_solve(const ProxFunction& d, double radius, const Vector& y) {
  Vector x = d.inverse_gradient(y);
  const double r = x.norm();
  if (r <= radius) return x;
  return y * (radius / y.norm());
}

std::optional<Vector> closed_form(const ProxFunction& d, const FeasibleSet& q, const Vector& y, const Vector& start,
                                  const ProxOptions& opts);

Vector projected_gradient(const ProxFunction& d, const FeasibleSet& q, const Vector& y, const Vector& start,
                          const ProxOptions& opts) {
  auto grad = [&](const Vector& x) -> Vector { return d.gradient(x) - y; };
  Vector x = q.project(start);
  Vector gx = grad(x);
  double t = 1.0;
  double residual = q.tangent_residual(x, gx);
  for (int it = 0; it < opts.max_inner_iterations; ++it) {
    if (residual <= opts.tolerance) return x;
    Vector xn;
    Vector gn;
    double ss = 0.0;
    double sy = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 100; ++bt) {
      xn = q.project(x - t * gx);
      const Vector s = xn - x;
      ss = s.squaredNorm();
      if (ss == 0.0) break;
      gn = grad(xn);
      sy = s.dot(gn - gx);
      if (sy <= ss / t) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    t = sy > 0.0 ? ss / sy : 2.0 * t;
    x = std::move(xn);
    gx = std::move(gn);
    residual = q.tangent_residual(x, gx);
  }
  if (residual <= opts.tolerance) return x;
  throw NumericalFailure(fmt::format("prox step: inner solver stopped with residual {:.3e}", residual), residual);
}

std::optional<Vector> closed_form(const ProxFunction& d, const FeasibleSet& q, const Vector& y, const Vector& start,
                                  const ProxOptions& opts) {
  using PK = ProxFunction::Kind;
  using SK = FeasibleSet::Kind;
  switch (d.kind()) {
    case PK::Euclidean:
      return q.project(y);
    case PK::Power:
    case PK::Quartic:
      switch (q.kind()) {
        case SK::WholeSpace:
          return d.inverse_gradient(y);
        case SK::Box:
          return radial_box_solve(d, q.alpha(), y);
        case SK::Ball:
          return radial_ball_solve(d, q.radius(), y);
        case SK::Orthant:
          return d.inverse_gradient(y.cwiseMax(0.0));
        case SK::Product:
          return std::nullopt;
      }
      return std::nullopt;
    case PK::ShiftedScaled:
      // R^2 |(x - c)/R|^2 / 2 = |x - c|^2 / 2, so the step is a projection.
      if (d.base().kind() == PK::Euclidean) return q.project(d.center() + y);
      if (q.kind() == SK::WholeSpace && d.has_inverse_gradient()) return d.inverse_gradient(y);
      return std::nullopt;
    case PK::Composite: {
      const auto sizes = d.block_sizes();
      const auto blocks = q.split(sizes);
      if (!blocks) return std::nullopt;
      Vector x(d.dimension());
      Index offset = 0;
      const auto& parts = d.components();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const Index n = sizes[i];
        x.segment(offset, n) = linear_prox(parts[i].prox, (*blocks)[i], y.segment(offset, n) / parts[i].weight,
                                           start.segment(offset, n), opts);
        offset += n;
      }
      return x;
    }
    case PK::Custom:
      if (q.kind() == SK::WholeSpace && d.has_inverse_gradient()) return d.inverse_gradient(y);
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Vector linear_prox(const ProxFunction& d, const FeasibleSet& q, const Vector& y, const Vector& start,
                   const ProxOptions& opts) {
  if (auto x = closed_form(d, q, y, start, opts)) return *std::move(x);
  return projected_gradient(d, q, y, start, opts);
}

Vector prox_step(const ProxFunction& d, const FeasibleSet& q, const Vector& z, const Vector& c,
                 const ProxOptions& opts) {
  const Index n = d.dimension();
  if (q.dimension() != n) {
    throw InvalidArgument(fmt::format("prox_step: set dimension {} != prox dimension {}", q.dimension(), n));
  }
  require_dimension(z, n, "prox_step z");
  require_dimension(c, n, "prox_step c");
  require_finite(c, "prox_step c");
  Vector x = linear_prox(d, q, d.gradient(z) - c, z, opts);
  if (!x.allFinite()) throw NumericalFailure("prox_step: non-finite result", std::numeric_limits<double>::infinity());
  return x;
}

double prox_residual(const ProxFunction& d, const FeasibleSet& q, const Vector& z, const Vector& c,
                     const Vector& x) {
  return q.tangent_residual(x, c + d.gradient(x) - d.gradient(z));
}

Vector box_power_prox_solve(double p, double alpha, const Vector& y) {
  if (!(alpha > 0.0)) throw InvalidArgument("box_power_prox_solve: alpha must be positive");
  require_finite(y, "box_power_prox_solve y");
  return radial_box_solve(ProxFunction::power(y.size(), p), alpha, y);
}

}  // namespace bvi
