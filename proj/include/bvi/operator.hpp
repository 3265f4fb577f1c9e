#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "bvi/types.hpp"

namespace bvi {

/// Declared constants of an operator relative to a reference divergence.
struct OperatorConstants {
  std::optional<double> mu;  ///< relative strong monotonicity
  std::optional<double> M;   ///< relative boundedness
  std::optional<double> L;   ///< relative smoothness
};

/// Evaluation oracle g: R^n -> R^n of a variational inequality.
///
/// Each evaluation bumps an atomic call counter. Copies share the counter,
/// so a copy handed to a solver is accounted against the same oracle.
class VIOperator {
 public:
  using Map = std::function<Vector(const Vector&)>;

  VIOperator(Index dimension, Map eval, OperatorConstants constants = {});

  /// g(x). Throws InvalidArgument on a dimension mismatch and
  /// NumericalFailure if the oracle returns non-finite entries.
  Vector operator()(const Vector& x) const;

  Index dimension() const { return dimension_; }
  const OperatorConstants& constants() const { return constants_; }
  std::uint64_t call_count() const { return counter_->load(std::memory_order_relaxed); }

  /// Same oracle and counter, different declared constants.
  VIOperator with_constants(OperatorConstants constants) const;

 private:
  Index dimension_;
  Map eval_;
  OperatorConstants constants_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

}  // namespace bvi
