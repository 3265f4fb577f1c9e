#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "bvi/types.hpp"

namespace bvi::detail {

// Keeps every iterate while dimension * count stays under 1e6, then only a
// geometrically spaced subset.
class IterateStore {
 public:
  explicit IterateStore(Index dimension) : dimension_(dimension) {}

  void offer(std::size_t k, const Vector& x) {
    const bool dense = static_cast<double>(dimension_) * static_cast<double>(k + 1) <= 1e6;
    if (!dense && k < next_sparse_) return;
    if (!dense) next_sparse_ = std::max<std::size_t>(k + 1, static_cast<std::size_t>(std::ceil(1.1 * static_cast<double>(k))));
    points_.push_back(x);
    indices_.push_back(k);
  }

  // Always keep the final iterate.
  void finish(std::size_t k, const Vector& x) {
    if (indices_.empty() || indices_.back() != k) {
      points_.push_back(x);
      indices_.push_back(k);
    }
  }

  std::vector<Vector> take_points() { return std::move(points_); }
  std::vector<std::size_t> take_indices() { return std::move(indices_); }

 private:
  Index dimension_;
  std::size_t next_sparse_ = 0;
  std::vector<Vector> points_;
  std::vector<std::size_t> indices_;
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace bvi::detail
