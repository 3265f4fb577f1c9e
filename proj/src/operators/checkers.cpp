#include "bvi/checkers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bvi/errors.hpp"

namespace bvi {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::RelativeStrongMonotonicity:
      return "rel-strong-monotone";
    case Property::RelativeBoundedness:
      return "rel-bounded";
    case Property::RelativeSmoothness:
      return "rel-smooth";
  }
  return "unknown";
}

Property property_from_string(std::string_view name) {
  if (name == "rel-strong-monotone") return Property::RelativeStrongMonotonicity;
  if (name == "rel-bounded") return Property::RelativeBoundedness;
  if (name == "rel-smooth") return Property::RelativeSmoothness;
  throw InvalidArgument("unknown property '" + std::string(name) + "'");
}

namespace {

void validate(const VIOperator& g, const BregmanDivergence& div, double constant, const FeasibleSet& q,
              std::size_t samples) {
  if (!(constant > 0.0)) throw InvalidArgument("checker: constant must be positive");
  if (samples == 0) throw InvalidArgument("checker: needs at least one sample");
  if (g.dimension() != div.dimension() || g.dimension() != q.dimension()) {
    throw InvalidArgument("checker: operator, divergence and set dimensions differ");
  }
}

// Tracks the worst margin; ties keep the earliest sample.
struct Worst {
  double margin = -std::numeric_limits<double>::infinity();
  std::vector<Vector> witness;

  void offer(double m, std::initializer_list<const Vector*> points) {
    if (m > margin) {
      margin = m;
      witness.clear();
      for (const Vector* p : points) witness.push_back(*p);
    }
  }
};

// Extreme point of Q: a box vertex, a point on the sphere, a face of the
// orthant, or a far-out point of the whole space.
Vector extreme_point(const FeasibleSet& q, Rng& rng) {
  const Index n = q.dimension();
  switch (q.kind()) {
    case FeasibleSet::Kind::Box: {
      Vector v(n);
      for (Index i = 0; i < n; ++i) v[i] = rng.uniform() < 0.5 ? -q.alpha() : q.alpha();
      return v;
    }
    case FeasibleSet::Kind::Ball: {
      Vector v = q.sample(rng);
      const double r = v.norm();
      return r > 0.0 ? Vector(v * (q.radius() / r)) : v;
    }
    case FeasibleSet::Kind::Orthant: {
      Vector v = q.sample(rng);
      for (Index i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5) v[i] = 0.0;
      }
      return v;
    }
    case FeasibleSet::Kind::WholeSpace:
      return q.sample(rng) * std::pow(10.0, rng.uniform(-1.0, 1.0));
    case FeasibleSet::Kind::Product: {
      Vector v(n);
      Index offset = 0;
      for (const auto& part : q.parts()) {
        v.segment(offset, part.dimension()) = extreme_point(part, rng);
        offset += part.dimension();
      }
      return v;
    }
  }
  return q.sample(rng);
}

// Nearby feasible point; relative constants are sharpest for close pairs.
Vector local_point(const FeasibleSet& q, const Vector& x, Rng& rng) {
  Vector u(x.size());
  for (Index i = 0; i < x.size(); ++i) u[i] = rng.normal();
  const double un = u.norm();
  if (un == 0.0) return x;
  return q.project(x + (1e-2 * (1.0 + x.norm()) / un) * u);
}

// Sample s of a check. Cycles through four modes: uniform anchor and
// partner, extreme anchor with uniform partner, uniform anchor with a local
// partner, extreme anchor with a local partner.
struct Sampler {
  const FeasibleSet& q;
  Rng rng;

  Vector anchor(std::size_t s) { return (s % 4 == 1 || s % 4 == 3) ? extreme_point(q, rng) : q.sample(rng); }
  Vector partner(std::size_t s, const Vector& a) { return s % 4 >= 2 ? local_point(q, a, rng) : q.sample(rng); }
};

}  // namespace

PropertyReport check_relative_strong_monotonicity(const VIOperator& g, const BregmanDivergence& div, double mu,
                                                  const FeasibleSet& q, std::size_t samples, std::uint64_t seed) {
  validate(g, div, mu, q, samples);
  Sampler sampler{q, Rng(seed)};
  Worst worst;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sampler.anchor(s);
    const Vector y = sampler.partner(s, x);
    const double margin = mu * div(y, x) + mu * div(x, y) - (g(y) - g(x)).dot(y - x);
    worst.offer(margin, {&x, &y});
  }
  return {Property::RelativeStrongMonotonicity, mu, samples, worst.margin, std::move(worst.witness)};
}

PropertyReport check_relative_boundedness(const VIOperator& g, const BregmanDivergence& div, double M,
                                          const FeasibleSet& q, std::size_t samples, std::uint64_t seed) {
  validate(g, div, M, q, samples);
  Sampler sampler{q, Rng(seed)};
  Worst worst;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sampler.anchor(s);
    const Vector y = sampler.partner(s, x);
    const double margin = g(x).dot(x - y) - M * std::sqrt(2.0 * std::max(div(y, x), 0.0));
    worst.offer(margin, {&x, &y});
  }
  return {Property::RelativeBoundedness, M, samples, worst.margin, std::move(worst.witness)};
}

PropertyReport check_relative_smoothness(const VIOperator& g, const BregmanDivergence& div, double L,
                                         const FeasibleSet& q, std::size_t samples, std::uint64_t seed) {
  validate(g, div, L, q, samples);
  Sampler sampler{q, Rng(seed)};
  Worst worst;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector z = sampler.anchor(s);
    const Vector x = sampler.partner(s, z);
    const Vector y = sampler.partner(s, z);
    const double margin = (g(y) - g(z)).dot(x - z) - L * div(x, z) - L * div(z, y);
    worst.offer(margin, {&x, &y, &z});
  }
  return {Property::RelativeSmoothness, L, samples, worst.margin, std::move(worst.witness)};
}

PropertyReport check_property(Property property, const VIOperator& g, const BregmanDivergence& div, double constant,
                              const FeasibleSet& q, std::size_t samples, std::uint64_t seed) {
  switch (property) {
    case Property::RelativeStrongMonotonicity:
      return check_relative_strong_monotonicity(g, div, constant, q, samples, seed);
    case Property::RelativeBoundedness:
      return check_relative_boundedness(g, div, constant, q, samples, seed);
    case Property::RelativeSmoothness:
      return check_relative_smoothness(g, div, constant, q, samples, seed);
  }
  throw InvalidArgument("check_property: unknown property");
}

}  // namespace bvi
