#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sobnet/activation.hpp"
#include "sobnet/error.hpp"
#include "sobnet/rng.hpp"

using namespace sobnet;

namespace {

double reference_value(const Activation& act, double x) {
  const double a = act.shape();
  switch (act.kind()) {
    case ActivationKind::linear: return x;
    case ActivationKind::relu: return x > 0 ? x : 0.0;
    case ActivationKind::elu: return x >= 0 ? x : std::exp(x) - 1.0;
    case ActivationKind::softsign: return x / (1.0 + std::abs(x));
    case ActivationKind::isrlu: return x >= 0 ? x : x / std::sqrt(1.0 + a * x * x);
    case ActivationKind::isru: return x / std::sqrt(1.0 + a * x * x);
    case ActivationKind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::tanh: return std::tanh(x);
    case ActivationKind::arctan: return std::atan(x);
  }
  return NAN;
}

bool near_kink(const Activation& act, double x, double r) {
  for (double k : act.kinks()) {
    if (std::abs(x - k) < r) return true;
  }
  return false;
}

}  // namespace

TEST(Activation, NamesRoundTrip) {
  for (const Activation& act : activation_catalog()) {
    EXPECT_EQ(activation_from_name(act.name()).kind(), act.kind());
  }
  EXPECT_EQ(activation_catalog().size(), 9u);
  EXPECT_THROW(activation_from_name("swish"), std::invalid_argument);
  EXPECT_THROW(Activation(ActivationKind::isru, 0.0), std::invalid_argument);
}

TEST(Activation, ShapeOnlyForIsru) {
  EXPECT_EQ(Activation(ActivationKind::isru, 4.0).shape(), 4.0);
  EXPECT_EQ(Activation(ActivationKind::sigmoid, 4.0).shape(), 1.0);
  const Activation isru(ActivationKind::isru, 4.0);
  EXPECT_DOUBLE_EQ(isru.value(1.0), 1.0 / std::sqrt(5.0));
}

TEST(Activation, SoftsignAtZero) {
  const Jet j = Activation(ActivationKind::softsign).eval_jet(0.0, 1);
  EXPECT_EQ(j.derivative(0), 0.0);
  EXPECT_EQ(j.derivative(1), 1.0);
}

TEST(Activation, EluLinearBranch) {
  const Activation elu(ActivationKind::elu);
  for (double x : {0.0, 0.5, 3.0}) {
    const Jet j = elu.eval_jet(x, 5);
    EXPECT_EQ(j.derivative(0), x);
    EXPECT_EQ(j.derivative(1), 1.0);
    for (int k = 2; k <= 5; ++k) EXPECT_EQ(j.derivative(k), 0.0);
  }
}

TEST(Activation, SigmoidAtZero) {
  const Jet j = Activation(ActivationKind::sigmoid).eval_jet(0.0, 2);
  EXPECT_DOUBLE_EQ(j.derivative(0), 0.5);
  EXPECT_DOUBLE_EQ(j.derivative(1), 0.25);
  EXPECT_NEAR(j.derivative(2), 0.0, 1e-17);
}

TEST(Activation, SmoothnessTable) {
  EXPECT_EQ(Activation(ActivationKind::elu).smoothness().m, 1);
  const auto ss = Activation(ActivationKind::softsign).smoothness();
  EXPECT_EQ(ss.m, 1);
  EXPECT_FALSE(ss.analytic);
  EXPECT_TRUE(ss.weak_next_derivative);
  EXPECT_EQ(Activation(ActivationKind::isrlu).smoothness().m, 2);
  EXPECT_EQ(Activation(ActivationKind::relu).smoothness().m, 0);
  for (auto k : {ActivationKind::isru, ActivationKind::sigmoid, ActivationKind::tanh,
                 ActivationKind::arctan}) {
    const auto s = Activation(k).smoothness();
    EXPECT_TRUE(s.analytic);
    EXPECT_TRUE(s.bounded);
    EXPECT_TRUE(s.sup_abs.has_value());
  }
  EXPECT_FALSE(Activation(ActivationKind::linear).smoothness().bounded);
  EXPECT_FALSE(Activation(ActivationKind::elu).smoothness().bounded);
}

TEST(Activation, OrderZeroMatchesClosedForm) {
  CounterRng rng(1, 0);
  for (const Activation& act : activation_catalog(1.7)) {
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(-20.0, 20.0);
      EXPECT_NEAR(act.eval_jet(x, 0).value(), reference_value(act, x), 1e-14)
          << act.name() << " at " << x;
      EXPECT_EQ(act.eval_jet(x, 3).value(), act.value(x));
    }
  }
}

TEST(Activation, JetMatchesFiniteDifferences) {
  const double h = 1e-5;
  for (const Activation& act : activation_catalog()) {
    CounterRng rng(2, 0);
    int checked = 0;
    while (checked < 100) {
      const double x = rng.uniform(-6.0, 6.0);
      if (near_kink(act, x, 1e-3)) continue;
      ++checked;
      const Jet j = act.eval_jet(x, 4);
      const Jet jp = act.eval_jet(x + h, 3);
      const Jet jm = act.eval_jet(x - h, 3);
      for (int k = 1; k <= 4; ++k) {
        const double fd = (jp.derivative(k - 1) - jm.derivative(k - 1)) / (2 * h);
        const double exact = j.derivative(k);
        EXPECT_LE(std::abs(fd - exact) / std::max(1.0, std::abs(exact)), 1e-6)
            << act.name() << " order " << k << " at " << x;
      }
    }
  }
}

TEST(Activation, DerivativeAgreesWithJet) {
  for (const Activation& act : activation_catalog()) {
    for (double x : {-3.0, -0.2, 0.0, 0.7, 4.0}) {
      EXPECT_EQ(act.derivative(x), act.eval_jet(x, 1).derivative(1)) << act.name();
    }
  }
}

TEST(Activation, MonotoneEntriesHavePositiveSlope) {
  CounterRng rng(3, 0);
  for (auto k : {ActivationKind::sigmoid, ActivationKind::tanh, ActivationKind::arctan,
                 ActivationKind::softsign, ActivationKind::isru}) {
    const Activation act(k);
    for (int i = 0; i < 500; ++i) {
      const double x = rng.uniform(-15.0, 15.0);
      EXPECT_GT(act.derivative(x), 0.0) << act.name() << " at " << x;
    }
  }
}

TEST(Activation, BoundedEntriesRespectBound) {
  CounterRng rng(4, 0);
  for (const Activation& act : activation_catalog()) {
    const auto s = act.smoothness();
    if (!s.bounded) continue;
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(-1e6, 1e6);
      EXPECT_LE(std::abs(act.value(x)), *s.sup_abs) << act.name();
    }
  }
}

TEST(Activation, FindZ0) {
  EXPECT_EQ(find_z0(Activation(ActivationKind::sigmoid)), 0.0);
  EXPECT_DOUBLE_EQ(Activation(ActivationKind::sigmoid).derivative(0.0), 0.25);
  EXPECT_EQ(find_z0(Activation(ActivationKind::tanh)), 0.0);
  EXPECT_EQ(find_z0(Activation(ActivationKind::softsign)), 0.0);
  for (const Activation& act : activation_catalog()) {
    EXPECT_GT(std::abs(act.derivative(find_z0(act))), 0.0) << act.name();
  }
}

// Closed-form sup|rho''| (by hand) against the numeric maximiser.
TEST(Activation, SecondDerivativeBounds) {
  const double s3 = std::sqrt(3.0);
  struct Case {
    ActivationKind k;
    double expected;
  } cases[] = {
      {ActivationKind::sigmoid, 1.0 / (6.0 * s3)},
      {ActivationKind::tanh, 4.0 / (3.0 * s3)},
      {ActivationKind::arctan, 3.0 * s3 / 8.0},
      {ActivationKind::isru, 1.5 * std::pow(0.8, 2.5)},
  };
  for (const auto& c : cases) {
    const Activation act(c.k);
    EXPECT_NEAR(sup_abs_derivative(act, 2, -50.0, 50.0), c.expected, 1e-12) << act.name();
    EXPECT_NEAR(act.smoothness().derivative_sup_bounds.at(2), c.expected, 1e-15) << act.name();
  }
  EXPECT_NEAR(1.0 / (6.0 * s3), 0.0962, 1e-4);
}

TEST(Activation, KinkConventionIsRightHanded) {
  const Activation relu(ActivationKind::relu);
  EXPECT_EQ(relu.derivative(0.0), 1.0);
  const Activation softsign(ActivationKind::softsign);
  // rho'' jumps from +2 to -2 at 0; right-hand branch gives -2.
  EXPECT_DOUBLE_EQ(softsign.eval_jet(0.0, 2).derivative(2), -2.0);
  EXPECT_DOUBLE_EQ(softsign.eval_jet(-1e-300, 2).derivative(2), 2.0);
}
