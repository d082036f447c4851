#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sobnet/activation.hpp"
#include "sobnet/kernels.hpp"
#include "sobnet/network.hpp"
#include "sobnet/partials.hpp"
#include "sobnet/quadrature.hpp"

namespace sobnet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using ScalarField = std::function<double(std::span<const double> x)>;

/// W^{k,p} on [-B, B]^d at a given quadrature resolution.
struct SobolevSpec {
  int k = 0;
  double p = 2.0;
  Box box;
  Resolution resolution;
};

/// (sum_i w_i |e_i|^p)^(1/p), or max_i |e_i| for p = inf. Throws
/// EvaluationError naming the first non-finite sample.
double lp_norm_of_samples(std::span<const double> errors, std::span<const double> weights,
                          double p);

double lp_error(const ScalarField& f, const ScalarField& g, double p,
                const QuadratureGrid& grid, Exec exec = Exec::parallel);

/// Per-multi-index terms ||D^alpha f - D^alpha g||_{L^p}, in multi_indices(d, k) order.
std::vector<double> sobolev_terms(const JetField& f, const JetField& g, int k, double p,
                                  const QuadratureGrid& grid, Exec exec = Exec::parallel);

/// sum over |alpha| <= k of ||D^alpha (f - g)||_{L^p}.
double sobolev_error(const JetField& f, const JetField& g, int k, double p,
                     const QuadratureGrid& grid, Exec exec = Exec::parallel);
double sobolev_error(const JetField& f, const JetField& g, const SobolevSpec& spec,
                     Exec exec = Exec::parallel);

/// ||n (rho^(l)(. + 1/n) - rho^(l)) - rho^(l+1)||_{L^p} over the grid.
double diff_quotient_error(const Activation& act, int l, double n, double p,
                           const QuadratureGrid& grid, Exec exec = Exec::parallel);

/// Realization of a scalar-output network as a field.
ScalarField network_scalar(const Network& net, const Activation& act);
JetField network_jets(const Network& net, const Activation& act);

/// Jets of x -> g(x_axis) for a univariate jet g along a coordinate axis.
JetField axis_field(std::function<Jet(double, int)> g, std::size_t axis = 0);

}  // namespace sobnet
