#include "sobnet/activation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sobnet/error.hpp"

namespace sobnet {

namespace {

constexpr std::array<std::pair<std::string_view, ActivationKind>, 9> kNames = {{
    {"linear", ActivationKind::linear},
    {"relu", ActivationKind::relu},
    {"elu", ActivationKind::elu},
    {"softsign", ActivationKind::softsign},
    {"isrlu", ActivationKind::isrlu},
    {"isru", ActivationKind::isru},
    {"sigmoid", ActivationKind::sigmoid},
    {"tanh", ActivationKind::tanh},
    {"arctan", ActivationKind::arctan},
}};

double stable_sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Jet linear_jet(double x, int order) { return Jet::variable(x, 1.0, order); }

// y = x (1 + a x^2)^(-1/2) on the jet of x + t.
Jet isru_jet(double x, double a, int order) {
  const Jet u = Jet::variable(x, 1.0, order);
  Jet w = u * u;
  w *= a;
  w += 1.0;
  return u * pow(w, -0.5);
}

// Taylor recurrences from the ODEs sigma' = sigma - sigma^2, tanh' = 1 - tanh^2.
// The caller supplies y'(0) in its most accurate closed form.
Jet riccati_jet(double y0, double y1, double linear, int order) {
  Jet y(order);
  y.coefficient(0) = y0;
  if (order == 0) return y;
  y.coefficient(1) = y1;
  for (int k = 1; k < order; ++k) {
    double sq = 0.0;
    for (int i = 0; i <= k; ++i) sq += y.coefficient(i) * y.coefficient(k - i);
    const double rhs = linear * y.coefficient(k) - sq;
    y.coefficient(k + 1) = rhs / (k + 1);
  }
  return y;
}

Jet arctan_jet(double x, int order) {
  Jet y(order);
  y.coefficient(0) = std::atan(x);
  if (order == 0) return y;
  // y' = 1 / (1 + (x + t)^2)
  const Jet u = Jet::variable(x, 1.0, order - 1);
  Jet w = u * u;
  w += 1.0;
  const Jet q = Jet::constant(1.0, order - 1) / w;
  for (int k = 0; k < order; ++k) y.coefficient(k + 1) = q.coefficient(k) / (k + 1);
  return y;
}

}  // namespace

Activation::Activation(ActivationKind kind, double shape) : kind_(kind), a_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("activation shape parameter must be positive");
  }
  if (kind != ActivationKind::isru && kind != ActivationKind::isrlu) a_ = 1.0;
}

std::string_view Activation::name() const noexcept {
  for (const auto& [n, k] : kNames) {
    if (k == kind_) return n;
  }
  return "unknown";
}

double Activation::value(double x) const noexcept {
  switch (kind_) {
    case ActivationKind::linear: return x;
    case ActivationKind::relu: return x >= 0 ? x : 0.0;
    case ActivationKind::elu: return x >= 0 ? x : std::expm1(x);
    case ActivationKind::softsign: return x / (1.0 + std::abs(x));
    case ActivationKind::isrlu: return x >= 0 ? x : x / std::sqrt(1.0 + a_ * x * x);
    case ActivationKind::isru: return x / std::sqrt(1.0 + a_ * x * x);
    case ActivationKind::sigmoid: return stable_sigmoid(x);
    case ActivationKind::tanh: return std::tanh(x);
    case ActivationKind::arctan: return std::atan(x);
  }
  return x;
}

double Activation::derivative(double x) const noexcept {
  switch (kind_) {
    case ActivationKind::linear: return 1.0;
    case ActivationKind::relu: return x >= 0 ? 1.0 : 0.0;
    case ActivationKind::elu: return x >= 0 ? 1.0 : std::exp(x);
    case ActivationKind::softsign: {
      const double s = 1.0 + std::abs(x);
      return 1.0 / (s * s);
    }
    case ActivationKind::isrlu:
      if (x >= 0) return 1.0;
      [[fallthrough]];
    case ActivationKind::isru: return std::pow(1.0 + a_ * x * x, -1.5);
    case ActivationKind::sigmoid: {
      const double s = stable_sigmoid(x);
      return s * (1.0 - s);
    }
    case ActivationKind::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::arctan: return 1.0 / (1.0 + x * x);
  }
  return 1.0;
}

Jet Activation::eval_jet(double x, int order) const {
  switch (kind_) {
    case ActivationKind::linear: return linear_jet(x, order);
    case ActivationKind::relu:
      return x >= 0 ? linear_jet(x, order) : Jet::constant(0.0, order);
    case ActivationKind::elu: {
      if (x >= 0) return linear_jet(x, order);
      Jet y(order);
      const double e = std::exp(x);
      for (int j = 0; j <= order; ++j) y.coefficient(j) = e / factorial(j);
      y.coefficient(0) = std::expm1(x);
      return y;
    }
    case ActivationKind::softsign: {
      // x >= 0: 1 - 1/(1+x);  x < 0: -1 + 1/(1-x)
      Jet y(order);
      y.coefficient(0) = value(x);
      const double s = 1.0 + std::abs(x);
      const double sign = x >= 0 ? -1.0 : 1.0;
      double inv = 1.0 / s;
      for (int j = 1; j <= order; ++j) {
        inv /= s;
        y.coefficient(j) = (x >= 0 ? -std::pow(sign, j) : 1.0) * inv;
      }
      if (order >= 1) y.coefficient(1) = derivative(x);
      return y;
    }
    case ActivationKind::isrlu:
      if (x >= 0) return linear_jet(x, order);
      [[fallthrough]];
    case ActivationKind::isru: {
      // keep the first two components identical to value() and derivative()
      Jet y = isru_jet(x, a_, order);
      y.coefficient(0) = value(x);
      if (order >= 1) y.coefficient(1) = derivative(x);
      return y;
    }
    case ActivationKind::sigmoid: return riccati_jet(value(x), derivative(x), 1.0, order);
    case ActivationKind::tanh: return riccati_jet(value(x), derivative(x), 0.0, order);
    case ActivationKind::arctan: return arctan_jet(x, order);
  }
  return linear_jet(x, order);
}

Smoothness Activation::smoothness() const {
  Smoothness s;
  const double sqrt3 = std::numbers::sqrt3;
  // Closed-form sup |rho''|, from maximising |rho''| by hand:
  //   sigmoid: rho'' = s(1-s)(1-2s), extremum at s = (3 -+ sqrt3)/6 -> 1/(6 sqrt3)
  //   tanh: -2 t (1 - t^2), extremum at t = 1/sqrt3 -> 4/(3 sqrt3)
  //   arctan: -2x/(1+x^2)^2, extremum at x = 1/sqrt3 -> 3 sqrt3/8
  //   ISRU/ISRLU: -3 a x (1+a x^2)^(-5/2), extremum at x = -+1/(2 sqrt a)
  //     -> (3 sqrt a / 2) (4/5)^(5/2)
  const double isru_second = 1.5 * std::sqrt(a_) * std::pow(0.8, 2.5);
  switch (kind_) {
    case ActivationKind::linear:
      s.m = Smoothness::kAnalytic;
      s.analytic = true;
      s.derivative_sup_bounds = {{1, 1.0}, {2, 0.0}};
      break;
    case ActivationKind::relu:
      s.m = 0;
      s.weak_next_derivative = true;
      s.derivative_sup_bounds = {{1, 1.0}};
      break;
    case ActivationKind::elu:
      s.m = 1;
      s.weak_next_derivative = true;
      s.derivative_sup_bounds = {{1, 1.0}, {2, 1.0}};
      break;
    case ActivationKind::softsign:
      s.m = 1;
      s.weak_next_derivative = true;
      s.bounded = true;
      s.sup_abs = 1.0;
      s.derivative_sup_bounds = {{1, 1.0}, {2, 2.0}};
      break;
    case ActivationKind::isrlu:
      s.m = 2;
      s.weak_next_derivative = true;
      s.derivative_sup_bounds = {{1, 1.0}, {2, isru_second}};
      break;
    case ActivationKind::isru:
      s.m = Smoothness::kAnalytic;
      s.analytic = true;
      s.bounded = true;
      s.sup_abs = 1.0 / std::sqrt(a_);
      s.derivative_sup_bounds = {{1, 1.0}, {2, isru_second}};
      break;
    case ActivationKind::sigmoid:
      s.m = Smoothness::kAnalytic;
      s.analytic = true;
      s.bounded = true;
      s.sup_abs = 1.0;
      s.derivative_sup_bounds = {{1, 0.25}, {2, 1.0 / (6.0 * sqrt3)}};
      break;
    case ActivationKind::tanh:
      s.m = Smoothness::kAnalytic;
      s.analytic = true;
      s.bounded = true;
      s.sup_abs = 1.0;
      s.derivative_sup_bounds = {{1, 1.0}, {2, 4.0 / (3.0 * sqrt3)}};
      break;
    case ActivationKind::arctan:
      s.m = Smoothness::kAnalytic;
      s.analytic = true;
      s.bounded = true;
      s.sup_abs = std::numbers::pi / 2.0;
      s.derivative_sup_bounds = {{1, 1.0}, {2, 3.0 * sqrt3 / 8.0}};
      break;
  }
  return s;
}

std::vector<double> Activation::kinks() const {
  switch (kind_) {
    case ActivationKind::relu:
    case ActivationKind::elu:
    case ActivationKind::softsign:
    case ActivationKind::isrlu: return {0.0};
    default: return {};
  }
}

bool Activation::identity_at(double x) const noexcept {
  switch (kind_) {
    case ActivationKind::linear: return true;
    case ActivationKind::relu:
    case ActivationKind::elu:
    case ActivationKind::isrlu: return x >= 0;
    default: return false;
  }
}

Activation activation_from_name(std::string_view name, double shape) {
  for (const auto& [n, k] : kNames) {
    if (n == name) return Activation(k, shape);
  }
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::vector<Activation> activation_catalog(double shape) {
  std::vector<Activation> out;
  for (const auto& entry : kNames) out.emplace_back(entry.second, shape);
  return out;
}

double find_z0(const Activation& act) {
  double best = -1.0;
  double arg = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double z = (i - 10000) * 1e-3;
    const double d = std::abs(act.derivative(z));
    if (d > best) {
      best = d;
      arg = z;
    }
  }
  if (best < 1e-12) {
    throw DegenerateActivationError("activation '" + std::string(act.name()) +
                                    "' has vanishing derivative on [-10, 10]");
  }
  return arg;
}

double sup_abs_derivative(const Activation& act, int order, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("empty interval");
  const auto f = [&](double x) { return std::abs(act.eval_jet(x, order).derivative(order)); };
  const int cells = std::max(1000, static_cast<int>((hi - lo) / 1e-3));
  const double h = (hi - lo) / cells;
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i <= cells; ++i) {
    const double v = f(lo + i * h);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // Golden section on the neighbouring cells; keep whichever is larger.
  double a = lo + std::max(0, best_i - 1) * h;
  double b = lo + std::min(cells, best_i + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace sobnet
