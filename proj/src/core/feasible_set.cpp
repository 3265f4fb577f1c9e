#include "bvi/feasible_set.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "bvi/errors.hpp"

namespace bvi {

namespace {

// Coordinates within this distance of a bound count as active.
double active_tol(double scale) { return 1e-12 * std::max(1.0, scale); }

}  // namespace

FeasibleSet FeasibleSet::whole_space(Index n) {
  if (n <= 0) throw InvalidArgument("whole_space: dimension must be positive");
  return FeasibleSet(Kind::WholeSpace, n, 0.0);
}

FeasibleSet FeasibleSet::box(Index n, double alpha) {
  if (n <= 0) throw InvalidArgument("box: dimension must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("box: alpha must be positive and finite");
  return FeasibleSet(Kind::Box, n, alpha);
}

FeasibleSet FeasibleSet::ball(Index n, double radius) {
  if (n <= 0) throw InvalidArgument("ball: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball: radius must be positive and finite");
  return FeasibleSet(Kind::Ball, n, radius);
}

FeasibleSet FeasibleSet::orthant(Index n) {
  if (n <= 0) throw InvalidArgument("orthant: dimension must be positive");
  return FeasibleSet(Kind::Orthant, n, 0.0);
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> parts) {
  if (parts.empty()) throw InvalidArgument("product: needs at least one factor");
  Index n = 0;
  for (const auto& p : parts) n += p.dimension();
  FeasibleSet set(Kind::Product, n, 0.0);
  set.parts_ = std::move(parts);
  return set;
}

double FeasibleSet::alpha() const {
  if (kind_ != Kind::Box) throw UnsupportedOperation("alpha: not a box");
  return scale_;
}

double FeasibleSet::radius() const {
  if (kind_ != Kind::Ball) throw UnsupportedOperation("radius: not a ball");
  return scale_;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dimension_ || !x.allFinite()) return false;
  switch (kind_) {
    case Kind::WholeSpace:
      return true;
    case Kind::Box:
      return x.cwiseAbs().maxCoeff() <= scale_ + tol;
    case Kind::Ball:
      return x.norm() <= scale_ + tol;
    case Kind::Orthant:
      return x.minCoeff() >= -tol;
    case Kind::Product: {
      Index offset = 0;
      for (const auto& p : parts_) {
        if (!p.contains(x.segment(offset, p.dimension()), tol)) return false;
        offset += p.dimension();
      }
      return true;
    }
  }
  return false;
}

Vector FeasibleSet::project(const Vector& x) const {
  require_dimension(x, dimension_, "FeasibleSet::project");
  switch (kind_) {
    case Kind::WholeSpace:
      return x;
    case Kind::Box:
      return x.cwiseMax(-scale_).cwiseMin(scale_);
    case Kind::Ball: {
      const double r = x.norm();
      if (r <= scale_) return x;
      return x * (scale_ / r);
    }
    case Kind::Orthant:
      return x.cwiseMax(0.0);
    case Kind::Product: {
      Vector out(dimension_);
      Index offset = 0;
      for (const auto& p : parts_) {
        out.segment(offset, p.dimension()) = p.project(x.segment(offset, p.dimension()));
        offset += p.dimension();
      }
      return out;
    }
  }
  return x;
}

Vector FeasibleSet::interior_point() const {
  switch (kind_) {
    case Kind::Orthant:
      return Vector::Ones(dimension_);
    case Kind::Product: {
      Vector out(dimension_);
      Index offset = 0;
      for (const auto& p : parts_) {
        out.segment(offset, p.dimension()) = p.interior_point();
        offset += p.dimension();
      }
      return out;
    }
    default:
      return Vector::Zero(dimension_);
  }
}

double FeasibleSet::tangent_residual(const Vector& x, const Vector& grad) const {
  require_dimension(x, dimension_, "tangent_residual");
  require_dimension(grad, dimension_, "tangent_residual");
  switch (kind_) {
    case Kind::WholeSpace:
      return grad.norm();
    case Kind::Box: {
      const double tol = active_tol(scale_);
      double sq = 0.0;
      for (Index i = 0; i < dimension_; ++i) {
        const double v = -grad[i];
        if (x[i] >= scale_ - tol && v > 0.0) continue;
        if (x[i] <= -scale_ + tol && v < 0.0) continue;
        sq += v * v;
      }
      return std::sqrt(sq);
    }
    case Kind::Ball: {
      const double r2 = x.squaredNorm();
      if (std::sqrt(r2) < scale_ - active_tol(scale_)) return grad.norm();
      Vector v = -grad;
      const double t = v.dot(x);
      if (t > 0.0) v -= (t / r2) * x;
      return v.norm();
    }
    case Kind::Orthant: {
      const double tol = active_tol(0.0);
      double sq = 0.0;
      for (Index i = 0; i < dimension_; ++i) {
        const double v = -grad[i];
        if (x[i] <= tol && v < 0.0) continue;
        sq += v * v;
      }
      return std::sqrt(sq);
    }
    case Kind::Product: {
      double sq = 0.0;
      Index offset = 0;
      for (const auto& p : parts_) {
        const double r = p.tangent_residual(x.segment(offset, p.dimension()), grad.segment(offset, p.dimension()));
        sq += r * r;
        offset += p.dimension();
      }
      return std::sqrt(sq);
    }
  }
  return 0.0;
}

Vector FeasibleSet::sample(Rng& rng) const {
  Vector out(dimension_);
  switch (kind_) {
    case Kind::WholeSpace:
      for (Index i = 0; i < dimension_; ++i) out[i] = rng.normal();
      break;
    case Kind::Box:
      for (Index i = 0; i < dimension_; ++i) out[i] = rng.uniform(-scale_, scale_);
      break;
    case Kind::Ball: {
      for (Index i = 0; i < dimension_; ++i) out[i] = rng.normal();
      double r = out.norm();
      while (r == 0.0) {
        for (Index i = 0; i < dimension_; ++i) out[i] = rng.normal();
        r = out.norm();
      }
      const double radial = scale_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dimension_));
      out *= radial / r;
      break;
    }
    case Kind::Orthant:
      for (Index i = 0; i < dimension_; ++i) out[i] = std::abs(rng.normal());
      break;
    case Kind::Product: {
      Index offset = 0;
      for (const auto& p : parts_) {
        out.segment(offset, p.dimension()) = p.sample(rng);
        offset += p.dimension();
      }
      break;
    }
  }
  return out;
}

std::vector<Vector> FeasibleSet::vertices(Index max_dimension) const {
  std::vector<Vector> out;
  if (kind_ != Kind::Box || dimension_ > max_dimension) return out;
  const std::uint64_t count = std::uint64_t{1} << dimension_;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Vector v(dimension_);
    for (Index i = 0; i < dimension_; ++i) v[i] = ((mask >> i) & 1U) ? scale_ : -scale_;
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<FeasibleSet>> FeasibleSet::split(std::span<const Index> block_sizes) const {
  const Index total = std::accumulate(block_sizes.begin(), block_sizes.end(), Index{0});
  if (total != dimension_) return std::nullopt;
  std::vector<FeasibleSet> out;
  out.reserve(block_sizes.size());
  switch (kind_) {
    case Kind::WholeSpace:
    case Kind::Box:
    case Kind::Orthant:
      for (Index n : block_sizes) {
        if (n <= 0) return std::nullopt;
        out.push_back(FeasibleSet(kind_, n, scale_));
      }
      return out;
    case Kind::Ball:
      if (block_sizes.size() == 1) return std::vector<FeasibleSet>{*this};
      return std::nullopt;
    case Kind::Product: {
      if (block_sizes.size() != parts_.size()) return std::nullopt;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].dimension() != block_sizes[i]) return std::nullopt;
      }
      return parts_;
    }
  }
  return std::nullopt;
}

std::pair<Vector, Vector> FeasibleSet::bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::WholeSpace:
      return {Vector::Constant(dimension_, -inf), Vector::Constant(dimension_, inf)};
    case Kind::Box:
    case Kind::Ball:
      return {Vector::Constant(dimension_, -scale_), Vector::Constant(dimension_, scale_)};
    case Kind::Orthant:
      return {Vector::Zero(dimension_), Vector::Constant(dimension_, inf)};
    case Kind::Product: {
      Vector lo(dimension_), hi(dimension_);
      Index offset = 0;
      for (const auto& p : parts_) {
        auto [plo, phi] = p.bounds();
        lo.segment(offset, p.dimension()) = plo;
        hi.segment(offset, p.dimension()) = phi;
        offset += p.dimension();
      }
      return {lo, hi};
    }
  }
  return {};
}

}  // namespace bvi
