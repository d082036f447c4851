#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sobnet/jet.hpp"

namespace sobnet {

enum class ActivationKind { linear, relu, elu, softsign, isrlu, isru, sigmoid, tanh, arctan };

/// Smoothness/boundedness metadata of an activation.
struct Smoothness {
  static constexpr int kAnalytic = 1 << 20;

  /// Largest m with rho in C^m; kAnalytic for real-analytic entries.
  int m = 0;
  bool analytic = false;
  bool bounded = false;
  /// sup |rho| for bounded entries.
  std::optional<double> sup_abs;
  /// rho^(m) is absolutely continuous with an L^p_loc weak derivative, so
  /// difference quotients converge one order higher than m - 1.
  bool weak_next_derivative = false;
  /// Closed-form sup_x |rho^(j)(x)| over the real line, where known.
  std::map<int, double> derivative_sup_bounds;
};

class Activation {
 public:
  explicit Activation(ActivationKind kind, double shape = 1.0);

  ActivationKind kind() const noexcept { return kind_; }
  /// Shape parameter a of ISRU/ISRLU; 1 for every other entry.
  double shape() const noexcept { return a_; }
  std::string_view name() const noexcept;

  double value(double x) const noexcept;
  double derivative(double x) const noexcept;
  /// (rho(x), rho'(x), ..., rho^(order)(x)) as a jet in t of rho(x + t).
  /// At a kink the right-hand branch is used.
  Jet eval_jet(double x, int order) const;

  Smoothness smoothness() const;

  /// Points where some derivative of rho jumps (empty for analytic entries).
  std::vector<double> kinks() const;
  /// True when rho(y) = y holds on a neighbourhood branch containing x, so
  /// callers may pass extended-precision arguments through unchanged.
  bool identity_at(double x) const noexcept;

 private:
  ActivationKind kind_;
  double a_;
};

Activation activation_from_name(std::string_view name, double shape = 1.0);
std::vector<Activation> activation_catalog(double shape = 1.0);

/// Grid point z0 in [-10, 10] (step 1e-3) maximising |rho'(z0)|; the first
/// maximiser wins ties. Throws DegenerateActivationError if |rho'| < 1e-12
/// everywhere on the grid.
double find_z0(const Activation& act);

/// sup |rho^(order)| over [lo, hi]: dense grid maximum refined by golden
/// section around the best cell.
double sup_abs_derivative(const Activation& act, int order, double lo, double hi);

}  // namespace sobnet
