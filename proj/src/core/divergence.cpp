#include "bvi/divergence.hpp"

#include "bvi/errors.hpp"

namespace bvi {

double BregmanDivergence::operator()(const Vector& y, const Vector& x) const { return prox_.divergence(y, x); }

double divergence(const BregmanDivergence& div, const Vector& y, const Vector& x) { return div(y, x); }

BregmanDivergence composite_divergence(const std::vector<std::pair<BregmanDivergence, double>>& parts) {
  if (parts.empty()) throw InvalidArgument("composite_divergence: needs at least one block");
  std::vector<ProxFunction::Component> components;
  components.reserve(parts.size());
  for (const auto& [div, weight] : parts) components.push_back({div.prox(), weight});
  return BregmanDivergence(ProxFunction::composite(std::move(components)));
}

}  // namespace bvi
