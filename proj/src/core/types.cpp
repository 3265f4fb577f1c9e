#include "bvi/types.hpp"

#include <fmt/format.h>

#include "bvi/errors.hpp"

namespace bvi {

void require_finite(const Vector& x, std::string_view what) {
  if (!x.allFinite()) throw InvalidArgument(fmt::format("{}: non-finite entry", what));
}

void require_dimension(const Vector& x, Index expected, std::string_view what) {
  if (x.size() != expected) {
    throw InvalidArgument(fmt::format("{}: expected dimension {}, got {}", what, expected, x.size()));
  }
}

}  // namespace bvi
