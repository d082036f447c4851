#pragma once

#include <array>
#include <span>
#include <vector>

namespace sobnet {

/// Truncated univariate Taylor expansion f(t0 + t) = sum_j c_j t^j, j <= order.
///
/// Coefficients are stored normalised (c_j = f^(j)(t0) / j!) because that is
/// the representation in which products and compositions are plain
/// truncated convolutions. `derivative(j)` returns the unnormalised value.
class Jet {
 public:
  static constexpr int kMaxOrder = 12;

  Jet() = default;
  explicit Jet(int order);

  static Jet constant(double value, int order);
  /// Jet of t -> value + slope * t.
  static Jet variable(double value, double slope, int order);
  static Jet from_derivatives(std::span<const double> derivatives);

  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }
  double coefficient(int j) const noexcept { return c_[j]; }
  double& coefficient(int j) noexcept { return c_[j]; }
  double derivative(int j) const noexcept;
  /// Alias of derivative(j): component j is d^j/dt^j at t = 0.
  double component(int j) const noexcept { return derivative(j); }
  std::vector<double> derivatives() const;
  bool all_finite() const noexcept;

  /// Same expansion truncated (or zero-extended) to a different order.
  Jet with_order(int order) const;

  Jet& operator+=(const Jet& other) noexcept;
  Jet& operator-=(const Jet& other) noexcept;
  Jet& operator*=(double s) noexcept;
  Jet& operator+=(double s) noexcept {
    c_[0] += s;
    return *this;
  }
  /// this += s * other, coefficientwise.
  void add_scaled(double s, const Jet& other) noexcept;

  friend Jet operator+(Jet a, const Jet& b) noexcept { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) noexcept { return a -= b; }
  friend Jet operator*(Jet a, double s) noexcept { return a *= s; }
  friend Jet operator*(double s, Jet a) noexcept { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) noexcept;
  friend Jet operator/(const Jet& a, const Jet& b) noexcept;

 private:
  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

double factorial(int n) noexcept;

/// Truncated power w^alpha of a jet with w.value() > 0.
Jet pow(const Jet& w, double alpha) noexcept;
Jet exp(const Jet& w) noexcept;

/// Taylor expansion of g(inner(t)) given g^(j)(inner.value()) for
/// j = 0..inner.order(). This is the Faa di Bruno sum evaluated by Horner's
/// rule on the truncated series.
Jet compose(std::span<const double> outer_derivatives, const Jet& inner) noexcept;

}  // namespace sobnet
