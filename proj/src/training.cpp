#include "sobnet/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sobnet/error.hpp"

namespace sobnet {

PiecewiseTarget PiecewiseTarget::linear(double B, std::vector<double> interior_knots,
                                        std::vector<double> values) {
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  if (values.size() != interior_knots.size() + 2) {
    throw std::invalid_argument("need one value per knot plus both endpoints");
  }
  PiecewiseTarget t;
  t.kind_ = Kind::linear;
  t.B_ = B;
  t.breaks_.push_back(-B);
  for (double k : interior_knots) {
    if (!(k > t.breaks_.back()) || !(k < B)) {
      throw std::invalid_argument("knots must be increasing and inside (-B, B)");
    }
    t.breaks_.push_back(k);
  }
  t.breaks_.push_back(B);
  for (std::size_t s = 0; s + 1 < t.breaks_.size(); ++s) {
    const double slope = (values[s + 1] - values[s]) / (t.breaks_[s + 1] - t.breaks_[s]);
    t.coeffs_.push_back({values[s], slope, 0.0});
  }
  return t;
}

PiecewiseTarget PiecewiseTarget::antiderivative(const PiecewiseTarget& g) {
  if (g.kind_ != Kind::linear) throw std::invalid_argument("antiderivative needs a linear g");
  PiecewiseTarget f;
  f.kind_ = Kind::quadratic;
  f.B_ = g.B_;
  f.breaks_ = g.breaks_;
  double acc = 0.0;
  for (std::size_t s = 0; s < g.coeffs_.size(); ++s) {
    const auto& c = g.coeffs_[s];
    f.coeffs_.push_back({acc, c[0], 0.5 * c[1]});
    const double h = g.breaks_[s + 1] - g.breaks_[s];
    acc += h * (c[0] + 0.5 * c[1] * h);
  }
  return f;
}

std::vector<double> PiecewiseTarget::knots() const {
  return {breaks_.begin() + 1, breaks_.end() - 1};
}

std::size_t PiecewiseTarget::segment_of(double x) const noexcept {
  const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
  return static_cast<std::size_t>(it - (breaks_.begin() + 1));
}

double PiecewiseTarget::value(double x) const noexcept {
  const std::size_t s = segment_of(x);
  const auto& c = coeffs_[s];
  const double u = x - breaks_[s];
  return c[0] + u * (c[1] + u * c[2]);
}

Jet PiecewiseTarget::jet(double x, int order) const {
  Jet j(order);
  const std::size_t s = segment_of(x);
  const auto& c = coeffs_[s];
  const double u = x - breaks_[s];
  j.coefficient(0) = c[0] + u * (c[1] + u * c[2]);
  if (order >= 1) j.coefficient(1) = c[1] + 2.0 * c[2] * u;
  if (order >= 2) j.coefficient(2) = c[2];
  return j;
}

std::pair<double, double> PiecewiseTarget::one_sided(std::size_t i, int j) const {
  if (i + 2 >= breaks_.size()) throw std::out_of_range("no such interior knot");
  const auto eval = [&](std::size_t s, double u) {
    const auto& c = coeffs_[s];
    switch (j) {
      case 0: return c[0] + u * (c[1] + u * c[2]);
      case 1: return c[1] + 2.0 * c[2] * u;
      case 2: return 2.0 * c[2];
      default: return 0.0;
    }
  };
  return {eval(i, breaks_[i + 1] - breaks_[i]), eval(i + 1, 0.0)};
}

TargetFunction PiecewiseTarget::as_target() const {
  TargetFunction t;
  t.kind = TargetKind::synthetic;
  t.description = kind_ == Kind::linear ? "piecewise linear" : "piecewise quadratic";
  const PiecewiseTarget copy = *this;
  t.jets = axis_field([copy](double x, int order) { return copy.jet(x, order); }, 0);
  t.value = [copy](std::span<const double> x) { return copy.value(x[0]); };
  return t;
}

PiecewiseTarget gen_piecewise_linear(std::uint64_t seed, int num_knots, double B, double lo,
                                     double hi) {
  if (num_knots < 1) throw std::invalid_argument("need at least one knot");
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  CounterRng rng(seed, 1);
  std::vector<double> raw(num_knots);
  for (double& k : raw) k = rng.uniform(-B, B);
  std::sort(raw.begin(), raw.end());
  const double gap = B / 50.0;
  std::vector<double> knots;
  double last = -B;
  for (double k : raw) {
    if (k - last >= gap && B - k >= gap) {
      knots.push_back(k);
      last = k;
    }
  }
  std::vector<double> values(knots.size() + 2);
  for (double& v : values) v = rng.uniform(lo, hi);
  return PiecewiseTarget::linear(B, std::move(knots), std::move(values));
}

PiecewiseTarget gen_piecewise_quadratic(std::uint64_t seed, int num_knots, double B, double lo,
                                        double hi) {
  return PiecewiseTarget::antiderivative(gen_piecewise_linear(seed, num_knots, B, lo, hi));
}

TargetFunction rho_prime_target(const Activation& act) {
  TargetFunction t;
  t.kind = TargetKind::rho_prime_of_J;
  t.description = std::string("rho', rho = ") + std::string(act.name());
  t.jets = axis_field(
      [act](double x, int order) {
        const Jet r = act.eval_jet(x, order + 1);
        Jet j(order);
        for (int c = 0; c <= order; ++c) j.coefficient(c) = r.coefficient(c + 1) * (c + 1);
        return j;
      },
      0);
  t.value = [act](std::span<const double> x) { return act.derivative(x[0]); };
  return t;
}

PointSet uniform_batch(CounterRng& rng, std::size_t n, std::size_t d, double B) {
  PointSet ps;
  ps.dim = d;
  ps.coords.resize(n * d);
  for (double& c : ps.coords) c = rng.uniform(-B, B);
  return ps;
}

double sobolev_loss(const Network& net, const Activation& act, const JetField& target, int k,
                    const PointSet& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  if (batch.dim != net.input_dim()) throw ShapeError("batch dimension differs from network input");
  const PartialsEvaluator pe(batch.dim, k);
  const JetField f = network_jets(net, act);
  std::vector<double> per_point(batch.size());
  std::vector<double> a(pe.size());
  std::vector<double> b(pe.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    pe.evaluate(f, batch.point(i), a);
    pe.evaluate(target, batch.point(i), b);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    per_point[i] = s;
  }
  return pairwise_sum(per_point) / static_cast<double>(batch.size());
}

namespace {

// Forward Taylor propagation of one directional jet with everything the
// reverse sweep needs.
class JetTape {
 public:
  explicit JetTape(const Network& net) : net_(net) {
    const auto& layers = net.layers();
    in_.resize(layers.size());
    z_.resize(layers.size());
    offsets_.resize(layers.size());
    std::size_t off = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      offsets_[l] = off;
      off += layers[l].rows * layers[l].cols + layers[l].rows;
    }
  }

  const Jet& forward(const Activation& act, std::span<const double> x,
                     std::span<const double> dir, int order) {
    order_ = order;
    const auto& layers = net_.layers();
    in_[0].clear();
    for (std::size_t j = 0; j < x.size(); ++j) in_[0].push_back(Jet::variable(x[j], dir[j], order));
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const Layer& L = layers[l];
      auto& z = z_[l];
      z.assign(L.rows, Jet(order));
      for (std::size_t i = 0; i < L.rows; ++i) {
        Jet& zi = z[i];
        zi.coefficient(0) = L.bias[i];
        for (std::size_t j = 0; j < L.cols; ++j) zi.add_scaled(L.weight(i, j), in_[l][j]);
      }
      if (l + 1 == layers.size()) break;
      auto& y = in_[l + 1];
      y.resize(L.rows);
      for (std::size_t i = 0; i < L.rows; ++i) {
        const Jet rho = act.eval_jet(z[i].value(), order);
        double d[Jet::kMaxOrder + 1];
        for (int c = 0; c <= order; ++c) d[c] = rho.derivative(c);
        y[i] = compose(std::span<const double>(d, order + 1), z[i]);
      }
    }
    return z_.back()[0];
  }

  // Adds d(sum_c out_adj[c] * out.coefficient(c)) / d params into grad.
  void backward(const Activation& act, std::span<const double> out_adj, std::span<double> grad) {
    const auto& layers = net_.layers();
    const int m = order_;
    zbar_.assign(1, Jet(m));
    for (int c = 0; c <= m; ++c) zbar_[0].coefficient(c) = out_adj[c];
    for (std::size_t l = layers.size(); l-- > 0;) {
      const Layer& L = layers[l];
      const std::size_t off = offsets_[l];
      const auto& in = in_[l];
      for (std::size_t i = 0; i < L.rows; ++i) {
        const Jet& zb = zbar_[i];
        for (std::size_t j = 0; j < L.cols; ++j) {
          double s = 0.0;
          for (int c = 0; c <= m; ++c) s += zb.coefficient(c) * in[j].coefficient(c);
          grad[off + i * L.cols + j] += s;
        }
        grad[off + L.rows * L.cols + i] += zb.coefficient(0);
      }
      if (l == 0) break;
      // Adjoint of the activation outputs feeding layer l.
      ybar_.assign(L.cols, Jet(m));
      for (std::size_t i = 0; i < L.rows; ++i) {
        for (std::size_t j = 0; j < L.cols; ++j) ybar_[j].add_scaled(L.weight(i, j), zbar_[i]);
      }
      // y = rho(z): dy_c / dz_i is coefficient c - i of rho'(z(t)).
      const auto& zprev = z_[l - 1];
      zbar_.assign(L.cols, Jet(m));
      for (std::size_t j = 0; j < L.cols; ++j) {
        const Jet rho = act.eval_jet(zprev[j].value(), m + 1);
        double d[Jet::kMaxOrder + 1];
        for (int c = 0; c <= m; ++c) d[c] = rho.derivative(c + 1);
        const Jet D = compose(std::span<const double>(d, m + 1), zprev[j]);
        for (int i = 0; i <= m; ++i) {
          double s = 0.0;
          for (int c = i; c <= m; ++c) s += ybar_[j].coefficient(c) * D.coefficient(c - i);
          zbar_[j].coefficient(i) = s;
        }
      }
    }
  }

 private:
  const Network& net_;
  int order_ = 0;
  std::vector<std::vector<Jet>> in_;
  std::vector<std::vector<Jet>> z_;
  std::vector<std::size_t> offsets_;
  std::vector<Jet> zbar_;
  std::vector<Jet> ybar_;
};

}  // namespace

LossGradient loss_and_gradient(const Network& net, const Activation& act, const JetField& target,
                               int k, const PointSet& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  if (batch.dim != net.input_dim()) throw ShapeError("batch dimension differs from network input");
  if (net.output_dim() != 1) throw ShapeError("Sobolev loss needs a scalar-output network");
  if (k < 0 || k + 1 > Jet::kMaxOrder) throw std::invalid_argument("bad Sobolev order");
  const std::size_t d = batch.dim;
  const std::size_t n = batch.size();
  const double scale = 1.0 / static_cast<double>(n);
  const PartialsEvaluator pe(d, k);
  const std::size_t na = pe.size();

  LossGradient out;
  out.grad.assign(net.arch().parameter_count(), 0.0);
  std::vector<double> per_point(n);
  JetTape tape(net);
  std::vector<double> T(na);
  std::vector<double> P(na);
  std::vector<double> adj(k + 1);
  std::vector<double> e1(d, 0.0);
  e1[0] = 1.0;

  for (std::size_t p = 0; p < n; ++p) {
    const auto x = batch.point(p);
    pe.evaluate(target, x, T);
    if (d == 1) {
      const Jet& y = tape.forward(act, x, e1, k);
      double s = 0.0;
      for (int r = 0; r <= k; ++r) {
        const double e = y.derivative(r) - T[r];
        s += e * e;
        adj[r] = scale * 2.0 * e * factorial(r);
      }
      per_point[p] = s;
      tape.backward(act, adj, out.grad);
      continue;
    }
    // Mixed partials: one jet per interpolation direction, twice (forward
    // values first, then adjoints once all residuals are known).
    for (const auto& b : pe.blocks()) {
      for (std::size_t bi = 0; bi < b.count; ++bi) {
        std::span<const double> dir = b.r == 0 ? std::span<const double>(e1)
                                               : std::span<const double>(b.directions).subspan(bi * d, d);
        const Jet& y = tape.forward(act, x, dir, b.r);
        const double Dval = y.derivative(b.r);
        if (b.r == 0) {
          P[b.first] = Dval;
          continue;
        }
        if (bi == 0) {
          for (std::size_t ai = 0; ai < b.count; ++ai) P[b.first + ai] = 0.0;
        }
        for (std::size_t ai = 0; ai < b.count; ++ai) {
          P[b.first + ai] += b.inverse[ai * b.count + bi] * Dval;
        }
      }
    }
    double s = 0.0;
    for (std::size_t a = 0; a < na; ++a) s += (P[a] - T[a]) * (P[a] - T[a]);
    per_point[p] = s;
    for (const auto& b : pe.blocks()) {
      for (std::size_t bi = 0; bi < b.count; ++bi) {
        std::span<const double> dir = b.r == 0 ? std::span<const double>(e1)
                                               : std::span<const double>(b.directions).subspan(bi * d, d);
        tape.forward(act, x, dir, b.r);
        double w = 0.0;
        for (std::size_t ai = 0; ai < b.count; ++ai) {
          const double e = P[b.first + ai] - T[b.first + ai];
          w += 2.0 * e * (b.r == 0 ? 1.0 : b.inverse[ai * b.count + bi]);
        }
        std::fill(adj.begin(), adj.end(), 0.0);
        adj[b.r] = scale * w * factorial(b.r);
        tape.backward(act, std::span<const double>(adj).first(b.r + 1), out.grad);
      }
    }
  }
  out.loss = pairwise_sum(per_point) * scale;
  return out;
}

std::vector<double> loss_gradient(const Network& net, const Activation& act,
                                  const JetField& target, int k, const PointSet& batch) {
  return loss_and_gradient(net, act, target, k, batch).grad;
}

void adam_step(std::vector<double>& params, std::span<const double> grad, AdamState& state) {
  if (grad.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("Adam vectors differ in length");
  }
  const AdamConfig& h = state.hp;
  ++state.t;
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * grad[i];
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= h.lr * mhat / (std::sqrt(vhat) + h.eps);
  }
}

std::string_view target_spec_name(TargetSpec t) noexcept {
  switch (t) {
    case TargetSpec::piecewise_linear: return "pwl";
    case TargetSpec::piecewise_quadratic: return "pwq";
    case TargetSpec::projection: return "proj";
    case TargetSpec::rho_prime: return "rho-prime";
  }
  return "?";
}

TargetSpec target_spec_from_name(std::string_view name) {
  for (TargetSpec t : {TargetSpec::piecewise_linear, TargetSpec::piecewise_quadratic,
                       TargetSpec::projection, TargetSpec::rho_prime}) {
    if (target_spec_name(t) == name) return t;
  }
  throw std::invalid_argument("unknown target kind: " + std::string(name));
}

Architecture TrainConfig::architecture() const {
  if (arch.size() < 2) throw std::invalid_argument("architecture needs d and at least one width");
  return Architecture(arch[0], {arch.begin() + 1, arch.end()});
}

TrainConfig preset_config(std::string_view name) {
  TrainConfig c;
  c.preset = std::string(name);
  c.trials = 100;
  if (name == "elu-pwl") {
    c.arch = {1, 10, 1};
    c.activation = "elu";
    c.k = 1;
    c.target = TargetSpec::piecewise_linear;
  } else if (name == "isrlu-pwq") {
    c.arch = {1, 10, 1};
    c.activation = "isrlu";
    c.k = 2;
    c.target = TargetSpec::piecewise_quadratic;
  } else if (name == "sigmoid-proj") {
    c.arch = {2, 10, 1};
    c.activation = "sigmoid";
    c.k = 2;
    c.target = TargetSpec::projection;
  } else if (name == "rate-softsign") {
    c.arch = {1, 2, 1};
    c.activation = "softsign";
    c.k = 0;
    c.target = TargetSpec::rho_prime;
  } else {
    throw std::invalid_argument("unknown preset: " + std::string(name));
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"elu-pwl", "isrlu-pwq", "sigmoid-proj", "rate-softsign"};
}

namespace {

JetField make_target(const TrainConfig& c, const Activation& act, std::uint64_t seed) {
  switch (c.target) {
    case TargetSpec::piecewise_linear:
      return gen_piecewise_linear(seed, c.num_knots, c.B, c.target_lo, c.target_hi).as_target().jets;
    case TargetSpec::piecewise_quadratic:
      return gen_piecewise_quadratic(seed, c.num_knots, c.B, c.target_lo, c.target_hi)
          .as_target()
          .jets;
    case TargetSpec::projection: return projection_target(0).jets;
    case TargetSpec::rho_prime: return rho_prime_target(act).jets;
  }
  throw std::logic_error("unhandled target kind");
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

TrialResult run_trial(const TrainConfig& config, std::uint64_t trial_seed, int trial,
                      const std::optional<Network>& init) {
  if (config.epochs < 1 || config.batch < 1) throw std::invalid_argument("epochs and batch must be >= 1");
  const Activation act = activation_from_name(config.activation, config.shape);
  const Architecture arch = config.architecture();
  if (arch.output_dim() != 1) throw ShapeError("training needs a scalar-output network");
  if (config.target != TargetSpec::projection && arch.input_dim() != 1) {
    throw ShapeError("univariate targets need input dimension 1");
  }

  Network net = init ? *init : random_init(arch, trial_seed, config.init_scale);
  if (!(net.arch() == arch)) throw ShapeError("initial network does not match the architecture");
  if (config.clamp) net = clamp_weights(net, *config.clamp);

  const JetField target = make_target(config, act, trial_seed);
  CounterRng batch_rng(trial_seed, 2);
  std::vector<double> params = net.flatten();
  AdamState state(params.size(), config.adam);

  TrialResult res;
  res.trial = trial;
  res.seed = trial_seed;
  res.initial_norm = total_norm(net);
  res.records.reserve(config.epochs);
  double best = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const PointSet batch = uniform_batch(batch_rng, config.batch, arch.input_dim(), config.B);
    const LossGradient lg = loss_and_gradient(net, act, target, config.k, batch);
    if (!std::isfinite(lg.loss) || !all_finite(lg.grad)) {
      res.diverged = true;
      break;
    }
    best = std::min(best, lg.loss);
    adam_step(params, lg.grad, state);
    if (!all_finite(params)) {
      res.diverged = true;
      break;
    }
    net = net.with_parameters(params);
    if (config.clamp) {
      net = clamp_weights(net, *config.clamp);
      params = net.flatten();
    }
    ExperimentRecord r;
    r.trial = trial;
    r.epoch = epoch;
    r.loss = lg.loss;
    r.best_loss = best;
    r.total_norm = total_norm(net);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.records.push_back(r);
  }
  res.final_net = net;
  return res;
}

std::vector<std::uint64_t> trial_seeds(const TrainConfig& config) {
  if (!config.trial_seeds.empty()) return config.trial_seeds;
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<std::uint64_t> seeds(config.trials);
  for (int i = 0; i < config.trials; ++i) seeds[i] = derive_seed(config.seed, i);
  return seeds;
}

ExperimentResult run_experiment(const TrainConfig& config, Exec exec,
                                const std::optional<Network>& init) {
  const std::vector<std::uint64_t> seeds = trial_seeds(config);
  ExperimentResult out;
  out.trials.resize(seeds.size());
  for_each_node(seeds.size(), exec, [&](std::size_t i) {
    out.trials[i] = run_trial(config, seeds[i], static_cast<int>(i), init);
  });

  std::vector<const TrialResult*> ok;
  for (const auto& t : out.trials) {
    if (!t.diverged) ok.push_back(&t);
  }
  if (ok.empty()) throw ExperimentError("every trial diverged");
  const double m = static_cast<double>(ok.size());
  for (int e = 0; e < config.epochs; ++e) {
    AggregateRow row;
    row.epoch = e + 1;
    double sl = 0.0, sn = 0.0;
    for (const TrialResult* t : ok) {
      sl += t->records[e].best_loss;
      sn += t->records[e].total_norm;
    }
    row.mean_best_loss = sl / m;
    row.mean_norm = sn / m;
    double var = 0.0;
    if (ok.size() > 1) {
      for (const TrialResult* t : ok) {
        const double dv = t->records[e].total_norm - row.mean_norm;
        var += dv * dv;
      }
      var /= m - 1.0;
    }
    const double half = 1.96 * std::sqrt(var / m);
    row.norm_lo95 = row.mean_norm - half;
    row.norm_hi95 = row.mean_norm + half;
    out.aggregate.push_back(row);
  }

  int checkpoint = 0;
  const int every = std::max(1, config.checkpoint_every);
  for (const TrialResult* t : ok) {
    for (const auto& r : t->records) {
      if (r.epoch % every == 0 || r.epoch == config.epochs) {
        out.scatter.push_back({checkpoint++, r.trial, r.epoch, r.loss, r.total_norm});
      }
    }
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace sobnet
