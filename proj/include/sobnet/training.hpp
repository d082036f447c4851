#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobnet/activation.hpp"
#include "sobnet/constructions.hpp"
#include "sobnet/kernels.hpp"
#include "sobnet/network.hpp"
#include "sobnet/partials.hpp"
#include "sobnet/rng.hpp"

namespace sobnet {

/// Piecewise polynomial on [-B, B], stored per segment as
/// c0 + c1 s + c2 s^2 with s = x - left knot. Derivatives use the right-hand
/// segment at knots.
class PiecewiseTarget {
 public:
  enum class Kind { linear, quadratic };

  /// Linear interpolant of `values` at (-B, interior..., B).
  static PiecewiseTarget linear(double B, std::vector<double> interior_knots,
                                std::vector<double> values);
  /// f(x) = integral of g from -B to x, g the given piecewise-linear slope.
  static PiecewiseTarget antiderivative(const PiecewiseTarget& g);

  Kind kind() const noexcept { return kind_; }
  double B() const noexcept { return B_; }
  /// Interior knots.
  std::vector<double> knots() const;
  std::size_t segments() const noexcept { return coeffs_.size(); }
  /// Segment polynomial coefficients (c0, c1, c2) of segment s.
  const std::array<double, 3>& coefficients(std::size_t s) const noexcept { return coeffs_[s]; }

  double value(double x) const noexcept;
  /// Jet of t -> f(x + t).
  Jet jet(double x, int order) const;
  /// Left and right one-sided derivatives of order j at interior knot i.
  std::pair<double, double> one_sided(std::size_t i, int j) const;

  TargetFunction as_target() const;

 private:
  std::size_t segment_of(double x) const noexcept;

  Kind kind_ = Kind::linear;
  double B_ = 1.0;
  std::vector<double> breaks_;  // -B, interior knots, B
  std::vector<std::array<double, 3>> coeffs_;
};

/// Knots uniform in (-B, B), dropped when closer than B/50 to a kept knot or
/// to an endpoint; values at knots and endpoints uniform in [lo, hi].
PiecewiseTarget gen_piecewise_linear(std::uint64_t seed, int num_knots, double B, double lo,
                                     double hi);
/// Antiderivative of gen_piecewise_linear(seed, num_knots, B, lo, hi).
PiecewiseTarget gen_piecewise_quadratic(std::uint64_t seed, int num_knots, double B, double lo,
                                        double hi);

/// x -> rho'(x) as a target.
TargetFunction rho_prime_target(const Activation& act);

/// Points of a batch, row-major.
struct PointSet {
  std::size_t dim = 1;
  std::vector<double> coords;

  std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords.data() + i * dim, dim};
  }
};

PointSet uniform_batch(CounterRng& rng, std::size_t n, std::size_t d, double B);

/// Mean over the batch of sum_{|alpha| <= k} (D^alpha net - D^alpha f)^2,
/// computed from realize_jet.
double sobolev_loss(const Network& net, const Activation& act, const JetField& target, int k,
                    const PointSet& batch);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // flatten() order
};

/// Loss and its exact gradient by reverse-mode differentiation of the Taylor
/// propagation.
LossGradient loss_and_gradient(const Network& net, const Activation& act, const JetField& target,
                               int k, const PointSet& batch);
std::vector<double> loss_gradient(const Network& net, const Activation& act,
                                  const JetField& target, int k, const PointSet& batch);

struct AdamConfig {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig hp;
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;

  AdamState() = default;
  AdamState(std::size_t n, AdamConfig cfg) : hp(cfg), m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update in place.
void adam_step(std::vector<double>& params, std::span<const double> grad, AdamState& state);

enum class TargetSpec { piecewise_linear, piecewise_quadratic, projection, rho_prime };

std::string_view target_spec_name(TargetSpec t) noexcept;
TargetSpec target_spec_from_name(std::string_view name);

struct TrainConfig {
  std::string preset;
  std::vector<std::size_t> arch{1, 10, 1};  // d, N_1, ..., N_L
  std::string activation = "elu";
  double shape = 1.0;
  int k = 1;
  double B = 5.0;
  TargetSpec target = TargetSpec::piecewise_linear;
  int num_knots = 6;
  double target_lo = -3.0;
  double target_hi = 3.0;
  int epochs = 2000;
  int batch = 256;
  AdamConfig adam;
  double init_scale = 1.0;
  std::optional<double> clamp;
  int trials = 1;
  std::uint64_t seed = 0;
  /// Overrides the derived per-trial seeds when non-empty.
  std::vector<std::uint64_t> trial_seeds;
  /// Epoch spacing of scatter checkpoints.
  int checkpoint_every = 100;

  Architecture architecture() const;
};

/// elu-pwl, isrlu-pwq, sigmoid-proj, rate-softsign. Throws invalid_argument
/// for other names.
TrainConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

struct ExperimentRecord {
  int trial = 0;
  int epoch = 0;
  double loss = 0.0;
  double best_loss = 0.0;
  double total_norm = 0.0;
  double wall_time = 0.0;  // seconds since trial start; not exported
};

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  double initial_norm = 0.0;
  bool diverged = false;
  std::vector<ExperimentRecord> records;
  std::optional<Network> final_net;
};

/// Trains one network. `init`, when given, replaces random_init.
TrialResult run_trial(const TrainConfig& config, std::uint64_t trial_seed, int trial = 0,
                      const std::optional<Network>& init = std::nullopt);

struct AggregateRow {
  int epoch = 0;
  double mean_best_loss = 0.0;
  double mean_norm = 0.0;
  double norm_lo95 = 0.0;
  double norm_hi95 = 0.0;
};

struct ScatterRow {
  int checkpoint = 0;
  int trial = 0;
  int epoch = 0;
  double loss = 0.0;
  double total_norm = 0.0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<AggregateRow> aggregate;
  std::vector<ScatterRow> scatter;
};

std::vector<std::uint64_t> trial_seeds(const TrainConfig& config);

/// Runs all trials (concurrently under Exec::parallel) and aggregates
/// non-diverged trials in trial order. Bands are mean +- 1.96 s / sqrt(n).
ExperimentResult run_experiment(const TrainConfig& config, Exec exec = Exec::parallel,
                                const std::optional<Network>& init = std::nullopt);

double median(std::vector<double> v);

}  // namespace sobnet
