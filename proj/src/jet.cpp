#include "sobnet/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sobnet {

namespace {

constexpr std::array<double, 2 * Jet::kMaxOrder + 2> make_factorials() {
  std::array<double, 2 * Jet::kMaxOrder + 2> f{};
  f[0] = 1.0;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
  return f;
}

constexpr auto kFactorials = make_factorials();

void check_order(int order) {
  if (order < 0 || order > Jet::kMaxOrder) {
    throw std::out_of_range("jet order out of range [0, " +
                            std::to_string(Jet::kMaxOrder) + "]");
  }
}

}  // namespace

double factorial(int n) noexcept { return kFactorials[static_cast<std::size_t>(n)]; }

Jet::Jet(int order) : order_(order) { check_order(order); }

Jet Jet::constant(double value, int order) {
  Jet j(order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(double value, double slope, int order) {
  Jet j(order);
  j.c_[0] = value;
  if (order >= 1) j.c_[1] = slope;
  return j;
}

Jet Jet::from_derivatives(std::span<const double> derivatives) {
  if (derivatives.empty()) throw std::invalid_argument("empty derivative list");
  Jet j(static_cast<int>(derivatives.size()) - 1);
  for (int i = 0; i <= j.order_; ++i) j.c_[i] = derivatives[i] / factorial(i);
  return j;
}

double Jet::derivative(int j) const noexcept { return c_[j] * factorial(j); }

std::vector<double> Jet::derivatives() const {
  std::vector<double> out(static_cast<std::size_t>(order_) + 1);
  for (int i = 0; i <= order_; ++i) out[i] = derivative(i);
  return out;
}

bool Jet::all_finite() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + order_ + 1,
                     [](double v) { return std::isfinite(v); });
}

Jet Jet::with_order(int order) const {
  Jet j(order);
  std::copy_n(c_.begin(), std::min(order, order_) + 1, j.c_.begin());
  return j;
}

Jet& Jet::operator+=(const Jet& other) noexcept {
  assert(order_ == other.order_);
  for (int i = 0; i <= order_; ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) noexcept {
  assert(order_ == other.order_);
  for (int i = 0; i <= order_; ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) noexcept {
  for (int i = 0; i <= order_; ++i) c_[i] *= s;
  return *this;
}

void Jet::add_scaled(double s, const Jet& other) noexcept {
  assert(order_ == other.order_);
  for (int i = 0; i <= order_; ++i) c_[i] += s * other.c_[i];
}

Jet operator*(const Jet& a, const Jet& b) noexcept {
  assert(a.order_ == b.order_);
  Jet r(a.order_);
  for (int k = 0; k <= a.order_; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
    r.c_[k] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) noexcept {
  assert(a.order_ == b.order_);
  Jet q(a.order_);
  for (int k = 0; k <= a.order_; ++k) {
    double s = a.c_[k];
    for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
    q.c_[k] = s / b.c_[0];
  }
  return q;
}

Jet pow(const Jet& w, double alpha) noexcept {
  // k w_0 y_k = sum_{j=1..k} ((alpha + 1) j - k) w_j y_{k-j}
  const int m = w.order();
  Jet y(m);
  const double w0 = w.coefficient(0);
  y.coefficient(0) = std::pow(w0, alpha);
  for (int k = 1; k <= m; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) {
      s += ((alpha + 1.0) * j - k) * w.coefficient(j) * y.coefficient(k - j);
    }
    y.coefficient(k) = s / (k * w0);
  }
  return y;
}

Jet exp(const Jet& w) noexcept {
  // k y_k = sum_{j=1..k} j w_j y_{k-j}
  const int m = w.order();
  Jet y(m);
  y.coefficient(0) = std::exp(w.coefficient(0));
  for (int k = 1; k <= m; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * w.coefficient(j) * y.coefficient(k - j);
    y.coefficient(k) = s / k;
  }
  return y;
}

Jet compose(std::span<const double> outer, const Jet& inner) noexcept {
  const int m = inner.order();
  assert(static_cast<int>(outer.size()) >= m + 1);
  Jet shift = inner;
  shift.coefficient(0) = 0.0;
  Jet r = Jet::constant(outer[m] / factorial(m), m);
  for (int j = m - 1; j >= 0; --j) {
    r = r * shift;
    r.coefficient(0) += outer[j] / factorial(j);
  }
  return r;
}

}  // namespace sobnet
