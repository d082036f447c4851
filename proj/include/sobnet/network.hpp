#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sobnet/activation.hpp"
#include "sobnet/jet.hpp"

namespace sobnet {

/// (d, N_1, ..., N_L): input dimension and layer widths, N_L = output dimension.
class Architecture {
 public:
  Architecture(std::size_t input_dim, std::vector<std::size_t> widths);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return widths_.back(); }
  std::size_t num_layers() const noexcept { return widths_.size(); }
  /// N_l with N_0 = d.
  std::size_t width(std::size_t l) const noexcept {
    return l == 0 ? input_dim_ : widths_[l - 1];
  }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::size_t parameter_count() const noexcept;

  friend bool operator==(const Architecture&, const Architecture&) = default;

 private:
  std::size_t input_dim_;
  std::vector<std::size_t> widths_;
};

/// Dense row-major affine map y = A x + b.
struct Layer {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;  // rows * cols
  std::vector<double> bias;     // rows

  double weight(std::size_t i, std::size_t j) const noexcept { return weights[i * cols + j]; }
  double& weight(std::size_t i, std::size_t j) noexcept { return weights[i * cols + j]; }

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// A network as its sequence of (matrix, bias) pairs; the function it
/// computes depends on the activation passed to realize().
class Network {
 public:
  /// Validates shapes and finiteness; throws ShapeError otherwise.
  explicit Network(std::vector<Layer> layers);

  const Architecture& arch() const noexcept { return arch_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t input_dim() const noexcept { return arch_.input_dim(); }
  std::size_t output_dim() const noexcept { return arch_.output_dim(); }

  /// Parameters flattened layer by layer: A_l row-major, then b_l.
  std::vector<double> flatten() const;
  /// Same architecture with parameters taken from a flat vector.
  Network with_parameters(std::span<const double> params) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  Architecture arch_;
  std::vector<Layer> layers_;
};

Layer make_layer(std::size_t rows, std::size_t cols, std::vector<double> weights,
                 std::vector<double> bias);

/// W_L(rho(W_{L-1}(... rho(W_1 x)))). Activation is applied after every layer
/// but the last. Affine maps are accumulated with error-free transformations
/// (double-double), so the result is the realization of the stored
/// parameters up to one final rounding where rho acts as the identity.
std::vector<double> realize(const Network& net, const Activation& act,
                            std::span<const double> x);
double realize_scalar(const Network& net, const Activation& act,
                      std::span<const double> x);

/// Jet of t -> realize(net, act, x + t * direction) for a scalar-output net.
/// Component 0 is bit-identical to realize_scalar(net, act, x).
Jet realize_jet(const Network& net, const Activation& act, std::span<const double> x,
                std::span<const double> direction, int order);
Jet realize_jet(const Network& net, const Activation& act, std::span<const double> x,
                std::size_t axis, int order);

/// True if some hidden pre-activation at x lies within `radius` of a kink of act.
bool near_kink(const Network& net, const Activation& act, std::span<const double> x,
               double radius);

/// phi1 after phi2: L1 + L2 - 1 layers, merging phi2's last and phi1's first
/// affine maps.
Network concat(const Network& phi1, const Network& phi2);

/// max_l max|A_l| + max_l max|b_l|.
double total_norm(const Network& net) noexcept;

/// Entrywise clamp to [-c, c].
Network clamp_weights(const Network& net, double c);

/// i.i.d. N(0, scale^2) entries from CounterRng(seed, 0).
Network random_init(const Architecture& arch, std::uint64_t seed, double scale);

/// sup over R^d of |realize(net)| for an activation with finite sup |rho|:
/// max|A_L| * N_{L-1} * sup|rho| + max|b_L|. Requires at least two layers.
double realization_sup_bound(const Network& net, const Activation& act);

}  // namespace sobnet
