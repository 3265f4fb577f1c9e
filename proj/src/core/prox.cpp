#include "bvi/prox.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bvi/errors.hpp"

namespace bvi {

struct ProxFunction::Data {
  Kind kind = Kind::Euclidean;
  Index dimension = 0;
  double exponent = 1.0;

  // shifted-scaled
  std::optional<ProxFunction> base;
  Vector center;
  double scale = 1.0;

  // composite
  std::vector<Component> parts;
  std::vector<Index> offsets;

  CustomSpec custom;
};

namespace {

// Unique s >= 0 with s^3 + s = t, by Newton from an upper bracket. The cubic
// is convex and increasing on [0, inf), so the iterates decrease monotonically.
double solve_cubic_radius(double t) {
  if (t <= 0.0) return 0.0;
  double s = std::min(t, std::cbrt(t));
  for (int it = 0; it < 100; ++it) {
    const double next = s - (s * s * s + s - t) / (3.0 * s * s + 1.0);
    if (!(next < s)) break;
    s = next;
  }
  return s;
}

void require_same(Index got, Index expected, const char* what) {
  if (got != expected) throw InvalidArgument(fmt::format("{}: expected dimension {}, got {}", what, expected, got));
}

}  // namespace

ProxFunction ProxFunction::euclidean(Index n) {
  if (n <= 0) throw InvalidArgument("euclidean prox: dimension must be positive");
  auto data = std::make_shared<Data>();
  data->kind = Kind::Euclidean;
  data->dimension = n;
  return ProxFunction(std::move(data));
}

ProxFunction ProxFunction::power(Index n, double p) {
  if (n <= 0) throw InvalidArgument("power prox: dimension must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("power prox: exponent p must be >= 1");
  auto data = std::make_shared<Data>();
  data->kind = Kind::Power;
  data->dimension = n;
  data->exponent = p;
  return ProxFunction(std::move(data));
}

ProxFunction ProxFunction::quartic(Index n) {
  if (n <= 0) throw InvalidArgument("quartic prox: dimension must be positive");
  auto data = std::make_shared<Data>();
  data->kind = Kind::Quartic;
  data->dimension = n;
  return ProxFunction(std::move(data));
}

ProxFunction ProxFunction::shifted_scaled(const ProxFunction& base, Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("shifted_scaled_prox: radius must be positive");
  require_same(center.size(), base.dimension(), "shifted_scaled_prox");
  require_finite(center, "shifted_scaled_prox center");
  auto data = std::make_shared<Data>();
  data->kind = Kind::ShiftedScaled;
  data->dimension = base.dimension();
  data->base = base;
  data->center = std::move(center);
  data->scale = radius;
  return ProxFunction(std::move(data));
}

ProxFunction ProxFunction::composite(std::vector<Component> parts) {
  if (parts.empty()) throw InvalidArgument("composite prox: needs at least one block");
  auto data = std::make_shared<Data>();
  data->kind = Kind::Composite;
  Index offset = 0;
  for (const auto& part : parts) {
    if (!(part.weight > 0.0) || !std::isfinite(part.weight)) {
      throw InvalidArgument("composite prox: weights must be positive");
    }
    data->offsets.push_back(offset);
    offset += part.prox.dimension();
  }
  data->dimension = offset;
  data->parts = std::move(parts);
  return ProxFunction(std::move(data));
}

ProxFunction ProxFunction::custom(CustomSpec spec) {
  if (spec.dimension <= 0) throw InvalidArgument("custom prox: dimension must be positive");
  if (!spec.value || !spec.gradient) throw InvalidArgument("custom prox: value and gradient are required");
  if (spec.omega && !(*spec.omega > 0.0)) throw InvalidArgument("custom prox: omega must be positive");
  auto data = std::make_shared<Data>();
  data->kind = Kind::Custom;
  data->dimension = spec.dimension;
  data->custom = std::move(spec);
  return ProxFunction(std::move(data));
}

ProxFunction::Kind ProxFunction::kind() const { return data_->kind; }
Index ProxFunction::dimension() const { return data_->dimension; }

bool ProxFunction::is_radial() const {
  return data_->kind == Kind::Euclidean || data_->kind == Kind::Power || data_->kind == Kind::Quartic;
}

double ProxFunction::radial_factor(double s) const {
  switch (data_->kind) {
    case Kind::Euclidean:
      return 1.0;
    case Kind::Power:
      if (data_->exponent == 1.0) return 1.0;
      return std::pow(s, 2.0 * data_->exponent - 2.0);
    case Kind::Quartic:
      return s * s + 1.0;
    default:
      throw UnsupportedOperation("radial_factor: prox kind is not radial");
  }
}

double ProxFunction::exponent() const {
  if (data_->kind == Kind::Euclidean) return 1.0;
  if (data_->kind != Kind::Power) throw UnsupportedOperation("exponent: not a power prox");
  return data_->exponent;
}

double ProxFunction::value(const Vector& x) const {
  require_same(x.size(), data_->dimension, "ProxFunction::value");
  switch (data_->kind) {
    case Kind::Euclidean:
      return 0.5 * x.squaredNorm();
    case Kind::Power: {
      const double p = data_->exponent;
      return std::pow(x.norm(), 2.0 * p) / (2.0 * p);
    }
    case Kind::Quartic: {
      const double q = x.squaredNorm();
      return 0.25 * q * q + 0.5 * q;
    }
    case Kind::ShiftedScaled: {
      const double r = data_->scale;
      return r * r * data_->base->value((x - data_->center) / r);
    }
    case Kind::Composite: {
      double sum = 0.0;
      for (std::size_t i = 0; i < data_->parts.size(); ++i) {
        const auto& part = data_->parts[i];
        sum += part.weight * part.prox.value(x.segment(data_->offsets[i], part.prox.dimension()));
      }
      return sum;
    }
    case Kind::Custom:
      return data_->custom.value(x);
  }
  return 0.0;
}

Vector ProxFunction::gradient(const Vector& x) const {
  require_same(x.size(), data_->dimension, "ProxFunction::gradient");
  switch (data_->kind) {
    case Kind::Euclidean:
    case Kind::Power:
    case Kind::Quartic:
      return radial_factor(x.norm()) * x;
    case Kind::ShiftedScaled: {
      const double r = data_->scale;
      return r * data_->base->gradient((x - data_->center) / r);
    }
    case Kind::Composite: {
      Vector g(data_->dimension);
      for (std::size_t i = 0; i < data_->parts.size(); ++i) {
        const auto& part = data_->parts[i];
        const Index n = part.prox.dimension();
        g.segment(data_->offsets[i], n) = part.weight * part.prox.gradient(x.segment(data_->offsets[i], n));
      }
      return g;
    }
    case Kind::Custom: {
      Vector g = data_->custom.gradient(x);
      require_same(g.size(), data_->dimension, "custom prox gradient");
      return g;
    }
  }
  return Vector();
}

double ProxFunction::divergence(const Vector& y, const Vector& x) const {
  require_same(y.size(), data_->dimension, "divergence");
  require_same(x.size(), data_->dimension, "divergence");
  switch (data_->kind) {
    case Kind::Euclidean:
      return 0.5 * (y - x).squaredNorm();
    case Kind::Quartic: {
      // quartic = |x|^4/4 + euclidean; split so the quadratic part is exact.
      const double qy = y.squaredNorm();
      const double qx = x.squaredNorm();
      const double quart = 0.25 * qy * qy - 0.25 * qx * qx - qx * x.dot(y - x);
      return quart + 0.5 * (y - x).squaredNorm();
    }
    case Kind::ShiftedScaled: {
      const double r = data_->scale;
      return r * r * data_->base->divergence((y - data_->center) / r, (x - data_->center) / r);
    }
    case Kind::Composite: {
      double sum = 0.0;
      for (std::size_t i = 0; i < data_->parts.size(); ++i) {
        const auto& part = data_->parts[i];
        const Index n = part.prox.dimension();
        const Index o = data_->offsets[i];
        sum += part.weight * part.prox.divergence(y.segment(o, n), x.segment(o, n));
      }
      return sum;
    }
    case Kind::Power:
    case Kind::Custom:
      return value(y) - value(x) - gradient(x).dot(y - x);
  }
  return 0.0;
}

std::optional<double> ProxFunction::omega() const {
  switch (data_->kind) {
    case Kind::Euclidean:
      return 1.0;
    case Kind::Power:
      return 1.0 / data_->exponent;
    case Kind::Quartic:
      return 1.5;
    case Kind::ShiftedScaled:
      return data_->base->omega();
    case Kind::Composite: {
      double sum = 0.0;
      for (const auto& part : data_->parts) {
        const auto w = part.prox.omega();
        if (!w) return std::nullopt;
        sum += part.weight * *w;
      }
      return sum;
    }
    case Kind::Custom:
      return data_->custom.omega;
  }
  return std::nullopt;
}

std::optional<double> ProxFunction::strong_convexity() const {
  switch (data_->kind) {
    case Kind::Euclidean:
    case Kind::Quartic:
      return 1.0;
    case Kind::Power:
      if (data_->exponent == 1.0) return 1.0;
      return std::nullopt;
    case Kind::ShiftedScaled:
      return data_->base->strong_convexity();
    case Kind::Composite: {
      std::optional<double> modulus;
      for (const auto& part : data_->parts) {
        const auto s = part.prox.strong_convexity();
        if (!s) return std::nullopt;
        const double m = part.weight * *s;
        modulus = modulus ? std::min(*modulus, m) : m;
      }
      return modulus;
    }
    case Kind::Custom:
      return data_->custom.strong_convexity;
  }
  return std::nullopt;
}

bool ProxFunction::has_inverse_gradient() const {
  switch (data_->kind) {
    case Kind::Euclidean:
    case Kind::Power:
    case Kind::Quartic:
      return true;
    case Kind::ShiftedScaled:
      return data_->base->has_inverse_gradient();
    case Kind::Composite:
      return std::all_of(data_->parts.begin(), data_->parts.end(),
                         [](const Component& c) { return c.prox.has_inverse_gradient(); });
    case Kind::Custom:
      return static_cast<bool>(data_->custom.inverse_gradient);
  }
  return false;
}

Vector ProxFunction::inverse_gradient(const Vector& y) const {
  require_same(y.size(), data_->dimension, "inverse_gradient");
  switch (data_->kind) {
    case Kind::Euclidean:
      return y;
    case Kind::Power: {
      const double t = y.norm();
      if (t == 0.0) return Vector::Zero(y.size());
      const double p = data_->exponent;
      return y * std::pow(t, -(2.0 * p - 2.0) / (2.0 * p - 1.0));
    }
    case Kind::Quartic: {
      const double s = solve_cubic_radius(y.norm());
      return y / (s * s + 1.0);
    }
    case Kind::ShiftedScaled: {
      const double r = data_->scale;
      return data_->center + r * data_->base->inverse_gradient(y / r);
    }
    case Kind::Composite: {
      Vector x(data_->dimension);
      for (std::size_t i = 0; i < data_->parts.size(); ++i) {
        const auto& part = data_->parts[i];
        const Index n = part.prox.dimension();
        x.segment(data_->offsets[i], n) = part.prox.inverse_gradient(y.segment(data_->offsets[i], n) / part.weight);
      }
      return x;
    }
    case Kind::Custom: {
      if (!data_->custom.inverse_gradient) throw UnsupportedOperation("inverse_gradient: custom prox has no inverse");
      Vector x = data_->custom.inverse_gradient(y);
      require_same(x.size(), data_->dimension, "custom inverse gradient");
      return x;
    }
  }
  throw UnsupportedOperation("inverse_gradient: unsupported prox kind");
}

const ProxFunction& ProxFunction::base() const {
  if (data_->kind != Kind::ShiftedScaled) throw UnsupportedOperation("base: not a shifted-scaled prox");
  return *data_->base;
}

const Vector& ProxFunction::center() const {
  if (data_->kind != Kind::ShiftedScaled) throw UnsupportedOperation("center: not a shifted-scaled prox");
  return data_->center;
}

double ProxFunction::scale() const {
  if (data_->kind != Kind::ShiftedScaled) throw UnsupportedOperation("scale: not a shifted-scaled prox");
  return data_->scale;
}

const std::vector<ProxFunction::Component>& ProxFunction::components() const {
  if (data_->kind != Kind::Composite) throw UnsupportedOperation("components: not a composite prox");
  return data_->parts;
}

std::vector<Index> ProxFunction::block_sizes() const {
  std::vector<Index> sizes;
  for (const auto& part : components()) sizes.push_back(part.prox.dimension());
  return sizes;
}

Vector inverse_gradient(const ProxFunction& d, const Vector& y) { return d.inverse_gradient(y); }

ProxFunction shifted_scaled_prox(const ProxFunction& base, const Vector& center, double radius) {
  return ProxFunction::shifted_scaled(base, center, radius);
}

}  // namespace bvi
