#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bvi/random.hpp"
#include "bvi/types.hpp"

namespace bvi {

/// Closed convex set Q with enough structure for exact projections and
/// prox-mapping solutions: all of R^n, the box [-alpha, alpha]^n, the
/// centered Euclidean ball, the nonnegative orthant, and Cartesian products
/// of those.
class FeasibleSet {
 public:
  enum class Kind { WholeSpace, Box, Ball, Orthant, Product };

  static FeasibleSet whole_space(Index n);
  static FeasibleSet box(Index n, double alpha);
  static FeasibleSet ball(Index n, double radius);
  static FeasibleSet orthant(Index n);
  static FeasibleSet product(std::vector<FeasibleSet> parts);

  Kind kind() const { return kind_; }
  Index dimension() const { return dimension_; }
  double alpha() const;
  double radius() const;
  const std::vector<FeasibleSet>& parts() const { return parts_; }

  bool contains(const Vector& x, double tol = 1e-12) const;

  /// Euclidean projection onto the set.
  Vector project(const Vector& x) const;

  /// A point in the interior (relative to the ambient space when one exists).
  Vector interior_point() const;

  /// Norm of the projection of -grad onto the tangent cone of Q at x, i.e.
  ///   sup { <-grad, u - x> / |u - x| : u in Q, u != x }.
  /// Zero exactly when x satisfies the first-order condition of minimizing a
  /// function with gradient `grad` over Q.
  double tangent_residual(const Vector& x, const Vector& grad) const;

  /// Uniform on box/ball, standard normal on the whole space, |N(0,1)| per
  /// coordinate on the orthant (the law of rejection-sampling a normal).
  Vector sample(Rng& rng) const;

  /// Vertices of a box, in binary counting order. Empty for other kinds or
  /// when the dimension exceeds `max_dimension`.
  std::vector<Vector> vertices(Index max_dimension = 12) const;

  /// Restriction of the set to consecutive coordinate blocks of the given
  /// sizes, when the set factors that way.
  std::optional<std::vector<FeasibleSet>> split(std::span<const Index> block_sizes) const;

  /// Coordinate-wise lower and upper bounds (infinite where unbounded).
  std::pair<Vector, Vector> bounds() const;

 private:
  FeasibleSet(Kind kind, Index dimension, double scale) : kind_(kind), dimension_(dimension), scale_(scale) {}

  Kind kind_;
  Index dimension_;
  double scale_;
  std::vector<FeasibleSet> parts_;
};

}  // namespace bvi
