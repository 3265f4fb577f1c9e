#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bvi/types.hpp"

namespace bvi {

/// Convex differentiable reference ("prox") function d that generates a
/// Bregman divergence.
///
/// Supported kinds:
///   - euclidean       d(x) = |x|^2 / 2
///   - power(p)        d(x) = |x|^(2p) / (2p),  p >= 1
///   - quartic         d(x) = |x|^4 / 4 + |x|^2 / 2
///   - shifted-scaled  d(x) = R^2 base((x - c) / R)
///   - composite       d(x) = sum_i w_i d_i(x_i) over consecutive blocks
///   - custom          user-supplied value and gradient
///
/// The euclidean, power and quartic kinds are radial: grad d(x) = phi(|x|) x
/// with phi nondecreasing. Immutable; copies share state.
class ProxFunction {
 public:
  enum class Kind { Euclidean, Power, Quartic, ShiftedScaled, Composite, Custom };

  struct Component;

  struct CustomSpec {
    Index dimension = 0;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    /// Optional map y -> x with grad d(x) = y.
    std::function<Vector(const Vector&)> inverse_gradient;
    std::optional<double> omega;
    /// Strong convexity modulus with respect to the Euclidean norm, if known.
    std::optional<double> strong_convexity;
  };

  static ProxFunction euclidean(Index n);
  static ProxFunction power(Index n, double p);
  static ProxFunction quartic(Index n);
  static ProxFunction shifted_scaled(const ProxFunction& base, Vector center, double radius);
  static ProxFunction composite(std::vector<Component> parts);
  static ProxFunction custom(CustomSpec spec);

  Kind kind() const;
  Index dimension() const;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// V(y, x) = d(y) - d(x) - <grad d(x), y - x>, evaluated blockwise or in a
  /// cancellation-free form where the kind allows it.
  double divergence(const Vector& y, const Vector& x) const;

  /// Omega with d(x) <= Omega / 2 on the Euclidean unit ball, when known.
  std::optional<double> omega() const;

  /// Strong convexity modulus w.r.t. the Euclidean norm, when known.
  std::optional<double> strong_convexity() const;

  bool has_inverse_gradient() const;

  /// x with grad d(x) = y. Throws UnsupportedOperation for kinds without a
  /// closed-form inverse.
  Vector inverse_gradient(const Vector& y) const;

  bool is_radial() const;
  /// phi(s) with grad d(x) = phi(|x|) x. Radial kinds only.
  double radial_factor(double s) const;
  /// Exponent p of the power kind (1 for euclidean).
  double exponent() const;

  // Shifted-scaled accessors.
  const ProxFunction& base() const;
  const Vector& center() const;
  double scale() const;

  // Composite accessors.
  const std::vector<Component>& components() const;
  std::vector<Index> block_sizes() const;

 private:
  struct Data;
  explicit ProxFunction(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

struct ProxFunction::Component {
  ProxFunction prox;
  double weight = 1.0;
};

/// x with grad d(x) = y (closed forms: identity, power-law rescaling, and a
/// cubic root solve for the quartic kind).
Vector inverse_gradient(const ProxFunction& d, const Vector& y);

/// R^2 d((x - center) / R); its divergence is R^2 V((y - c)/R, (x - c)/R).
ProxFunction shifted_scaled_prox(const ProxFunction& base, const Vector& center, double radius);

}  // namespace bvi
