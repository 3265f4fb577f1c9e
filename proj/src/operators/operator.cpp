#include "bvi/operator.hpp"

#include <limits>

#include <fmt/format.h>

#include "bvi/errors.hpp"

namespace bvi {

VIOperator::VIOperator(Index dimension, Map eval, OperatorConstants constants)
    : dimension_(dimension),
      eval_(std::move(eval)),
      constants_(constants),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  if (dimension_ <= 0) throw InvalidArgument("VIOperator: dimension must be positive");
  if (!eval_) throw InvalidArgument("VIOperator: missing evaluation oracle");
  for (const auto& c : {constants_.mu, constants_.M, constants_.L}) {
    if (c && !(*c > 0.0)) throw InvalidArgument("VIOperator: declared constants must be positive");
  }
}

Vector VIOperator::operator()(const Vector& x) const {
  require_dimension(x, dimension_, "VIOperator argument");
  counter_->fetch_add(1, std::memory_order_relaxed);
  Vector gx = eval_(x);
  if (gx.size() != dimension_) {
    throw InvalidArgument(fmt::format("VIOperator: oracle returned dimension {}, expected {}", gx.size(), dimension_));
  }
  if (!gx.allFinite()) {
    throw NumericalFailure("VIOperator: oracle returned non-finite entries", std::numeric_limits<double>::infinity());
  }
  return gx;
}

VIOperator VIOperator::with_constants(OperatorConstants constants) const {
  VIOperator copy = *this;
  copy.constants_ = constants;
  return copy;
}

}  // namespace bvi
