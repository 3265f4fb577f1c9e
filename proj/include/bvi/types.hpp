#pragma once

#include <Eigen/Core>

#include <string_view>

namespace bvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// Throws InvalidArgument unless every entry of `x` is finite.
void require_finite(const Vector& x, std::string_view what);

/// Throws InvalidArgument unless `x` has `expected` entries.
void require_dimension(const Vector& x, Index expected, std::string_view what);

}  // namespace bvi
