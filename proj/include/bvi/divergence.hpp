#pragma once

#include <utility>
#include <vector>

#include "bvi/prox.hpp"

namespace bvi {

/// Bregman divergence V(y, x) = d(y) - d(x) - <grad d(x), y - x>.
class BregmanDivergence {
 public:
  explicit BregmanDivergence(ProxFunction prox) : prox_(std::move(prox)) {}

  double operator()(const Vector& y, const Vector& x) const;

  const ProxFunction& prox() const { return prox_; }
  Index dimension() const { return prox_.dimension(); }

 private:
  ProxFunction prox_;
};

double divergence(const BregmanDivergence& div, const Vector& y, const Vector& x);

/// Weighted sum of block divergences on the product space, e.g.
/// V((y, l), (x, l')) = V(y, x) + |l - l'|^2 / 2.
BregmanDivergence composite_divergence(const std::vector<std::pair<BregmanDivergence, double>>& parts);

}  // namespace bvi
