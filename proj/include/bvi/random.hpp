#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace bvi {

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Doubles and normals are derived here rather than through the
/// std distributions, whose algorithms are implementation-defined:
///   uniform() = (next_u64() >> 11) * 2^-53
///   normal()  = Box-Muller on (1 - uniform(), uniform()), both outputs used
/// Named streams seed the engine with splitmix64(seed ^ fnv1a64(name)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for a named consumer ("problem-gen", "sampler", ...).
  static Rng stream(std::uint64_t seed, std::string_view name);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace bvi
