#include <gtest/gtest.h>

#include <cmath>

#include "sobnet/error.hpp"
#include "sobnet/sobolev.hpp"
#include "sobnet/training.hpp"

using namespace sobnet;

namespace {

TrainConfig small_config(std::string_view preset) {
  TrainConfig c = preset_config(preset);
  c.epochs = 30;
  c.batch = 32;
  c.trials = 3;
  c.seed = 9;
  c.checkpoint_every = 10;
  return c;
}

}  // namespace

TEST(Targets, LinearInterpolation) {
  const auto f = PiecewiseTarget::linear(5.0, {0.0}, {1.0, -1.0, 2.0});
  EXPECT_DOUBLE_EQ(f.value(2.5), 0.5);
  EXPECT_DOUBLE_EQ(f.value(-5.0), 1.0);
  EXPECT_DOUBLE_EQ(f.value(5.0), 2.0);
  EXPECT_EQ(f.segments(), 2u);
  const auto [l, r] = f.one_sided(0, 1);
  EXPECT_DOUBLE_EQ(l, -0.4);
  EXPECT_DOUBLE_EQ(r, 0.6);
  EXPECT_DOUBLE_EQ(f.jet(0.0, 1).derivative(1), 0.6);
}

TEST(Targets, AntiderivativeOfConstant) {
  const auto g = PiecewiseTarget::linear(5.0, {}, {1.0, 1.0});
  const auto f = PiecewiseTarget::antiderivative(g);
  EXPECT_EQ(f.kind(), PiecewiseTarget::Kind::quadratic);
  for (double x : {-5.0, -1.0, 0.0, 3.3}) {
    const Jet j = f.jet(x, 2);
    EXPECT_NEAR(j.derivative(0), x + 5.0, 1e-14);
    EXPECT_EQ(j.derivative(1), 1.0);
    EXPECT_EQ(j.derivative(2), 0.0);
  }
}

TEST(Targets, QuadraticIsC1) {
  const auto f = gen_piecewise_quadratic(5, 6, 5.0, -3.0, 3.0);
  for (std::size_t i = 0; i < f.knots().size(); ++i) {
    const auto [l0, r0] = f.one_sided(i, 0);
    const auto [l1, r1] = f.one_sided(i, 1);
    EXPECT_NEAR(l0, r0, 1e-12);
    EXPECT_NEAR(l1, r1, 1e-12);
  }
}

TEST(Targets, GeneratorDeterminismAndSpacing) {
  const auto a = gen_piecewise_linear(17, 6, 5.0, -3.0, 3.0);
  const auto b = gen_piecewise_linear(17, 6, 5.0, -3.0, 3.0);
  EXPECT_EQ(a.knots(), b.knots());
  for (double x : {-4.9, -1.0, 0.3, 4.4}) EXPECT_EQ(a.value(x), b.value(x));
  EXPECT_NE(a.knots(), gen_piecewise_linear(18, 6, 5.0, -3.0, 3.0).knots());
  const auto k = a.knots();
  EXPECT_LE(k.size(), 6u);
  double prev = -5.0;
  for (double x : k) {
    EXPECT_GE(x - prev, 0.1);
    prev = x;
  }
  EXPECT_GE(5.0 - prev, 0.1);
  for (int i = 0; i <= 100; ++i) {
    const double v = a.value(-5.0 + i * 0.1);
    EXPECT_GE(v, -3.0);
    EXPECT_LE(v, 3.0);
  }
}

TEST(Training, LossZeroForExactFit) {
  const Activation lin(ActivationKind::linear);
  const Network net({make_layer(1, 1, {2.0}, {1.0})});
  const JetField target = axis_field([](double x, int o) { return Jet::variable(2 * x + 1, 2, o); });
  CounterRng rng(1, 2);
  const PointSet batch = uniform_batch(rng, 64, 1, 5.0);
  EXPECT_EQ(sobolev_loss(net, lin, target, 2, batch), 0.0);
}

TEST(Training, GradientZeroAtExactFit) {
  const Activation act(ActivationKind::sigmoid);
  const Network net = random_init(Architecture(2, {5, 1}), 3, 1.0);
  const JetField target = network_jets(net, act);
  CounterRng rng(2, 2);
  const PointSet batch = uniform_batch(rng, 40, 2, 3.0);
  const auto lg = loss_and_gradient(net, act, target, 2, batch);
  EXPECT_LE(lg.loss, 1e-28);
  for (double g : lg.grad) EXPECT_LE(std::abs(g), 1e-10);
}

TEST(Training, GradientLength) {
  const Activation act(ActivationKind::elu);
  const Network net = random_init(Architecture(1, {10, 1}), 1, 1.0);
  CounterRng rng(3, 2);
  const auto g = loss_gradient(net, act, gen_piecewise_linear(1, 6, 5, -3, 3).as_target().jets,
                               1, uniform_batch(rng, 8, 1, 5.0));
  EXPECT_EQ(g.size(), 31u);
}

TEST(Training, GradientMatchesFiniteDifferences) {
  const double h = 1e-6;
  int triples = 0;
  for (const Activation& act : activation_catalog()) {
    for (std::size_t d : {1u, 2u}) {
      for (int k = 0; k <= 2; ++k) {
        if (act.smoothness().m < k && !act.smoothness().analytic) continue;
        const Network net =
            random_init(Architecture(d, {3, 1}), 50 + triples, 0.7);
        const JetField target =
            d == 1 ? gen_piecewise_quadratic(triples, 4, 3.0, -1, 1).as_target().jets
                   : projection_target(1).jets;
        CounterRng rng(triples, 2);
        PointSet batch{d, {}};
        // points away from kinks of the net and the target
        while (batch.size() < 6) {
          const PointSet p = uniform_batch(rng, 1, d, 2.0);
          if (near_kink(net, act, p.point(0), 1e-2)) continue;
          batch.coords.insert(batch.coords.end(), p.coords.begin(), p.coords.end());
        }
        ++triples;
        const auto lg = loss_and_gradient(net, act, target, k, batch);
        EXPECT_DOUBLE_EQ(lg.loss, sobolev_loss(net, act, target, k, batch));
        auto params = net.flatten();
        for (std::size_t i = 0; i < params.size(); ++i) {
          const double save = params[i];
          params[i] = save + h;
          const double up = sobolev_loss(net.with_parameters(params), act, target, k, batch);
          params[i] = save - h;
          const double dn = sobolev_loss(net.with_parameters(params), act, target, k, batch);
          params[i] = save;
          const double fd = (up - dn) / (2 * h);
          EXPECT_LE(std::abs(fd - lg.grad[i]) / std::max(1.0, std::abs(lg.grad[i])), 1e-5)
              << act.name() << " d=" << d << " k=" << k << " param " << i;
        }
      }
    }
  }
  EXPECT_GE(triples, 40);
}

TEST(Adam, FirstStep) {
  std::vector<double> p = {0.0, 1.0};
  const std::vector<double> g = {2.0, -3.0};
  AdamState s(2, AdamConfig{});
  adam_step(p, g, s);
  EXPECT_NEAR(p[0], -0.005, 1e-10);
  EXPECT_NEAR(p[1], 1.005, 1e-10);
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, ZeroGradientAndPurity) {
  std::vector<double> p = {0.3, -0.2};
  AdamState s(2, AdamConfig{});
  adam_step(p, std::vector<double>{0.0, 0.0}, s);
  EXPECT_EQ(p, (std::vector<double>{0.3, -0.2}));
  std::vector<double> a = {1, 2}, b = {1, 2};
  AdamState sa(2, {}), sb(2, {});
  const std::vector<double> g = {0.1, 5};
  for (int i = 0; i < 5; ++i) {
    adam_step(a, g, sa);
    adam_step(b, g, sb);
  }
  EXPECT_EQ(a, b);
}

TEST(Presets, Table) {
  EXPECT_EQ(preset_names().size(), 4u);
  const auto s = preset_config("sigmoid-proj");
  EXPECT_EQ(s.arch, (std::vector<std::size_t>{2, 10, 1}));
  EXPECT_EQ(s.k, 2);
  EXPECT_EQ(s.target, TargetSpec::projection);
  EXPECT_EQ(preset_config("rate-softsign").arch, (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(preset_config("isrlu-pwq").activation, "isrlu");
  EXPECT_THROW(preset_config("nope"), std::invalid_argument);
  EXPECT_EQ(target_spec_from_name(target_spec_name(TargetSpec::rho_prime)), TargetSpec::rho_prime);
}

TEST(Trial, DeterministicAndMonotoneBest) {
  const TrainConfig c = small_config("elu-pwl");
  const auto a = run_trial(c, 123);
  const auto b = run_trial(c, 123);
  ASSERT_EQ(a.records.size(), 30u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].loss, b.records[i].loss);
    EXPECT_EQ(a.records[i].total_norm, b.records[i].total_norm);
    if (i) EXPECT_LE(a.records[i].best_loss, a.records[i - 1].best_loss);
  }
  EXPECT_EQ(*a.final_net, *b.final_net);
}

TEST(Trial, ClampBound) {
  TrainConfig c = small_config("rate-softsign");
  c.clamp = 0.5;
  c.init_scale = 3.0;
  const auto t = run_trial(c, 4);
  for (const auto& r : t.records) EXPECT_LE(r.total_norm, 1.0);
  EXPECT_LE(t.initial_norm, 1.0);
}

TEST(Trial, DivergenceIsReported) {
  TrainConfig c = small_config("elu-pwl");
  c.adam.lr = 1e300;
  const auto t = run_trial(c, 1);
  EXPECT_TRUE(t.diverged);
  TrainConfig all = c;
  EXPECT_THROW(run_experiment(all, Exec::serial), ExperimentError);
}

TEST(Experiment, IdenticalSeedsGiveZeroBands) {
  TrainConfig c = small_config("elu-pwl");
  c.trial_seeds = {77, 77};
  c.trials = 2;
  const auto r = run_experiment(c, Exec::serial);
  ASSERT_EQ(r.aggregate.size(), 30u);
  for (const auto& row : r.aggregate) {
    EXPECT_EQ(row.norm_lo95, row.mean_norm);
    EXPECT_EQ(row.norm_hi95, row.mean_norm);
  }
}

TEST(Experiment, AggregateMonotoneAndScatter) {
  const TrainConfig c = small_config("isrlu-pwq");
  const auto r = run_experiment(c, Exec::serial);
  for (std::size_t i = 1; i < r.aggregate.size(); ++i) {
    EXPECT_LE(r.aggregate[i].mean_best_loss, r.aggregate[i - 1].mean_best_loss);
  }
  // checkpoints at epochs 10, 20 and the final epoch 30 for each of 3 trials
  EXPECT_EQ(r.scatter.size(), 9u);
  EXPECT_EQ(trial_seeds(c).size(), 3u);
  EXPECT_NE(trial_seeds(c)[0], trial_seeds(c)[1]);
}

TEST(Experiment, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}
