#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bvi/divergence.hpp"
#include "bvi/feasible_set.hpp"
#include "bvi/operator.hpp"

namespace bvi {

enum class Property { RelativeStrongMonotonicity, RelativeBoundedness, RelativeSmoothness };

std::string_view to_string(Property p);
/// Accepts "rel-strong-monotone", "rel-bounded", "rel-smooth".
Property property_from_string(std::string_view name);

/// Sampled check of one of the defining inequalities. worst_violation is the
/// largest (lhs - rhs) seen; a value <= 0 certifies the constant on the
/// samples only.
struct PropertyReport {
  Property property;
  double constant = 0.0;
  std::size_t samples = 0;
  double worst_violation = 0.0;
  /// The sample attaining worst_violation: (x, y) or (x, y, z).
  std::vector<Vector> witness;

  bool certified(double tol = 0.0) const { return worst_violation <= tol; }
};

/// mu V(y, x) + mu V(x, y) <= <g(y) - g(x), y - x>
PropertyReport check_relative_strong_monotonicity(const VIOperator& g, const BregmanDivergence& div, double mu,
                                                  const FeasibleSet& q, std::size_t samples, std::uint64_t seed);

/// <g(x), x - y> <= M sqrt(2 V(y, x))
PropertyReport check_relative_boundedness(const VIOperator& g, const BregmanDivergence& div, double M,
                                          const FeasibleSet& q, std::size_t samples, std::uint64_t seed);

/// <g(y) - g(z), x - z> <= L V(x, z) + L V(z, y)
PropertyReport check_relative_smoothness(const VIOperator& g, const BregmanDivergence& div, double L,
                                         const FeasibleSet& q, std::size_t samples, std::uint64_t seed);

PropertyReport check_property(Property property, const VIOperator& g, const BregmanDivergence& div, double constant,
                              const FeasibleSet& q, std::size_t samples, std::uint64_t seed);

}  // namespace bvi
