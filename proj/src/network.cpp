#include "sobnet/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sobnet/error.hpp"
#include "sobnet/rng.hpp"

namespace sobnet {

namespace {

// Double-double value hi + lo with |lo| <= ulp(hi) / 2.
struct Dd {
  double hi = 0.0;
  double lo = 0.0;
};

inline Dd fast_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Dd two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd add(Dd x, Dd y) noexcept {
  Dd s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return fast_two_sum(s.hi, s.lo);
}

inline Dd mul(Dd x, double a) noexcept {
  const double p = x.hi * a;
  double e = std::fma(x.hi, a, -p);
  e += x.lo * a;
  return fast_two_sum(p, e);
}

inline double round_dd(Dd x) noexcept { return x.hi + x.lo; }

void require_input(const Network& net, std::size_t n) {
  if (n != net.input_dim()) {
    throw ShapeError("input has length " + std::to_string(n) + ", network expects " +
                     std::to_string(net.input_dim()));
  }
}

// Pre-activations of every layer, in double-double, flattened layer after
// layer into a per-thread buffer (offsets[l] is where layer l starts). Shared
// by realize and realize_jet so that their values agree bit for bit.
struct Forward {
  std::vector<Dd> pre;
  std::vector<std::size_t> offsets;
  std::vector<Dd> in;
  std::vector<Dd> next;
};

const Forward& forward_values(const Network& net, const Activation& act,
                              std::span<const double> x) {
  require_input(net, x.size());
  thread_local Forward f;
  const auto& layers = net.layers();
  f.pre.clear();
  f.offsets.clear();
  f.in.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) f.in[j] = {x[j], 0.0};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    f.offsets.push_back(f.pre.size());
    for (std::size_t i = 0; i < layer.rows; ++i) {
      Dd acc{layer.bias[i], 0.0};
      for (std::size_t j = 0; j < layer.cols; ++j) acc = add(acc, mul(f.in[j], layer.weight(i, j)));
      f.pre.push_back(acc);
    }
    if (l + 1 == layers.size()) break;
    f.next.resize(layer.rows);
    for (std::size_t i = 0; i < layer.rows; ++i) {
      const Dd zi = f.pre[f.offsets[l] + i];
      if (act.identity_at(zi.hi)) {
        f.next[i] = zi;
      } else {
        f.next[i] = fast_two_sum(act.value(zi.hi), act.derivative(zi.hi) * zi.lo);
      }
    }
    std::swap(f.in, f.next);
  }
  return f;
}

}  // namespace

Architecture::Architecture(std::size_t input_dim, std::vector<std::size_t> widths)
    : input_dim_(input_dim), widths_(std::move(widths)) {
  if (input_dim_ == 0) throw ShapeError("input dimension must be positive");
  if (widths_.empty()) throw ShapeError("architecture needs at least one layer");
  if (std::any_of(widths_.begin(), widths_.end(), [](std::size_t w) { return w == 0; })) {
    throw ShapeError("layer widths must be positive");
  }
}

std::size_t Architecture::parameter_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t l = 1; l <= widths_.size(); ++l) n += width(l) * (width(l - 1) + 1);
  return n;
}

Layer make_layer(std::size_t rows, std::size_t cols, std::vector<double> weights,
                 std::vector<double> bias) {
  return Layer{rows, cols, std::move(weights), std::move(bias)};
}

namespace {

Architecture architecture_of(const std::vector<Layer>& layers) {
  if (layers.empty()) throw ShapeError("network needs at least one layer");
  std::vector<std::size_t> widths;
  for (const Layer& l : layers) widths.push_back(l.rows);
  return Architecture(layers.front().cols, std::move(widths));
}

}  // namespace

Network::Network(std::vector<Layer> layers)
    : arch_(architecture_of(layers)), layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l + 1);
    if (l > 0 && layer.cols != layers_[l - 1].rows) {
      throw ShapeError(where + ": expects " + std::to_string(layer.cols) +
                       " inputs but previous layer has " +
                       std::to_string(layers_[l - 1].rows) + " outputs");
    }
    if (layer.weights.size() != layer.rows * layer.cols || layer.bias.size() != layer.rows) {
      throw ShapeError(where + ": storage does not match its " + std::to_string(layer.rows) +
                       "x" + std::to_string(layer.cols) + " shape");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      throw ShapeError(where + ": non-finite entry");
    }
  }
}

std::vector<double> Network::flatten() const {
  std::vector<double> out;
  out.reserve(arch_.parameter_count());
  for (const Layer& l : layers_) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

Network Network::with_parameters(std::span<const double> params) const {
  if (params.size() != arch_.parameter_count()) {
    throw ShapeError("parameter vector has length " + std::to_string(params.size()) +
                     ", architecture needs " + std::to_string(arch_.parameter_count()));
  }
  std::vector<Layer> layers = layers_;
  std::size_t k = 0;
  for (Layer& l : layers) {
    for (double& w : l.weights) w = params[k++];
    for (double& b : l.bias) b = params[k++];
  }
  return Network(std::move(layers));
}

std::vector<double> realize(const Network& net, const Activation& act,
                            std::span<const double> x) {
  const Forward& f = forward_values(net, act, x);
  std::vector<double> out(net.output_dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = round_dd(f.pre[f.offsets.back() + i]);
  return out;
}

double realize_scalar(const Network& net, const Activation& act, std::span<const double> x) {
  if (net.output_dim() != 1) throw ShapeError("network output is not scalar");
  const Forward& f = forward_values(net, act, x);
  return round_dd(f.pre[f.offsets.back()]);
}

Jet realize_jet(const Network& net, const Activation& act, std::span<const double> x,
                std::span<const double> direction, int order) {
  if (net.output_dim() != 1) throw ShapeError("realize_jet needs a scalar-output network");
  if (direction.size() != x.size()) throw ShapeError("direction length differs from input");
  if (order < 0 || order > Jet::kMaxOrder) throw std::out_of_range("jet order out of range");
  const Forward& f = forward_values(net, act, x);
  const auto& layers = net.layers();

  thread_local std::vector<Jet> in;
  thread_local std::vector<Jet> z;
  in.clear();
  for (std::size_t j = 0; j < x.size(); ++j) in.push_back(Jet::variable(x[j], direction[j], order));

  std::array<double, Jet::kMaxOrder + 1> derivs{};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    const Dd* pre = f.pre.data() + f.offsets[l];
    z.assign(layer.rows, Jet(order));
    for (std::size_t i = 0; i < layer.rows; ++i) {
      for (std::size_t j = 0; j < layer.cols; ++j) {
        const double a = layer.weight(i, j);
        if (a == 0.0) continue;
        for (int c = 1; c <= order; ++c) z[i].coefficient(c) += a * in[j].coefficient(c);
      }
      z[i].coefficient(0) = pre[i].hi;
    }
    if (l + 1 == layers.size()) break;
    in.resize(layer.rows);
    for (std::size_t i = 0; i < layer.rows; ++i) {
      const Dd zi = pre[i];
      const Jet rho = act.eval_jet(zi.hi, order);
      for (int c = 0; c <= order; ++c) derivs[c] = rho.derivative(c);
      in[i] = compose(std::span<const double>(derivs.data(), order + 1), z[i]);
      in[i].coefficient(0) = act.identity_at(zi.hi)
                                 ? round_dd(zi)
                                 : round_dd(fast_two_sum(act.value(zi.hi),
                                                         act.derivative(zi.hi) * zi.lo));
    }
  }
  Jet out = z[0];
  out.coefficient(0) = round_dd(f.pre[f.offsets.back()]);
  return out;
}

Jet realize_jet(const Network& net, const Activation& act, std::span<const double> x,
                std::size_t axis, int order) {
  if (axis >= x.size()) throw ShapeError("axis out of range");
  std::vector<double> dir(x.size(), 0.0);
  dir[axis] = 1.0;
  return realize_jet(net, act, x, dir, order);
}

bool near_kink(const Network& net, const Activation& act, std::span<const double> x,
               double radius) {
  const auto kinks = act.kinks();
  if (kinks.empty()) return false;
  const Forward& f = forward_values(net, act, x);
  // Every layer but the last feeds an activation.
  for (std::size_t i = 0; i < f.offsets.back(); ++i) {
    for (double k : kinks) {
      if (std::abs(f.pre[i].hi - k) < radius) return true;
    }
  }
  return false;
}

Network concat(const Network& phi1, const Network& phi2) {
  if (phi1.input_dim() != phi2.output_dim()) {
    throw ShapeError("concat: input dimension " + std::to_string(phi1.input_dim()) +
                     " of the outer network differs from output dimension " +
                     std::to_string(phi2.output_dim()) + " of the inner network");
  }
  const auto& l1 = phi1.layers();
  const auto& l2 = phi2.layers();
  std::vector<Layer> layers(l2.begin(), l2.end() - 1);

  const Layer& outer = l1.front();
  const Layer& inner = l2.back();
  Layer merged{outer.rows, inner.cols, std::vector<double>(outer.rows * inner.cols, 0.0),
               outer.bias};
  for (std::size_t i = 0; i < outer.rows; ++i) {
    for (std::size_t k = 0; k < outer.cols; ++k) {
      const double a = outer.weight(i, k);
      for (std::size_t j = 0; j < inner.cols; ++j) merged.weight(i, j) += a * inner.weight(k, j);
      merged.bias[i] += a * inner.bias[k];
    }
  }
  layers.push_back(std::move(merged));
  layers.insert(layers.end(), l1.begin() + 1, l1.end());
  return Network(std::move(layers));
}

double total_norm(const Network& net) noexcept {
  double wmax = 0.0;
  double bmax = 0.0;
  for (const Layer& l : net.layers()) {
    for (double w : l.weights) wmax = std::max(wmax, std::abs(w));
    for (double b : l.bias) bmax = std::max(bmax, std::abs(b));
  }
  return wmax + bmax;
}

Network clamp_weights(const Network& net, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("clamp bound must be positive");
  std::vector<Layer> layers = net.layers();
  for (Layer& l : layers) {
    for (double& w : l.weights) w = std::clamp(w, -c, c);
    for (double& b : l.bias) b = std::clamp(b, -c, c);
  }
  return Network(std::move(layers));
}

Network random_init(const Architecture& arch, std::uint64_t seed, double scale) {
  if (!(scale >= 0.0)) throw std::invalid_argument("init scale must be nonnegative");
  CounterRng rng(seed, 0);
  std::vector<Layer> layers;
  for (std::size_t l = 1; l <= arch.num_layers(); ++l) {
    Layer layer{arch.width(l), arch.width(l - 1), {}, {}};
    layer.weights.resize(layer.rows * layer.cols);
    layer.bias.resize(layer.rows);
    // + 0.0 turns the -0.0 of a zero scale into +0.0.
    for (double& w : layer.weights) w = scale * rng.normal() + 0.0;
    for (double& b : layer.bias) b = scale * rng.normal() + 0.0;
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

double realization_sup_bound(const Network& net, const Activation& act) {
  const auto sup = act.smoothness().sup_abs;
  if (!sup) throw UnsupportedError("activation is unbounded");
  if (net.layers().size() < 2) throw UnsupportedError("affine networks are unbounded");
  const Layer& last = net.layers().back();
  double wmax = 0.0;
  double bmax = 0.0;
  for (double w : last.weights) wmax = std::max(wmax, std::abs(w));
  for (double b : last.bias) bmax = std::max(bmax, std::abs(b));
  return wmax * static_cast<double>(last.cols) * *sup + bmax;
}

}  // namespace sobnet
