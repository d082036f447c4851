#pragma once

#include <string>
#include <vector>

#include "sobnet/activation.hpp"
#include "sobnet/kernels.hpp"
#include "sobnet/quadrature.hpp"

namespace sobnet {

enum class RateCase { cm, softsign, elu };

std::string_view rate_case_name(RateCase c) noexcept;

/// ||h_n - rho'||_{L^p(Omega)} <= K / n, hence <= C_p / ||Phi_n||_total with
/// C_p = 2K since ||Phi_n||_total = n + 1/n < 2n.
struct RateBound {
  std::string activation;
  double p = 2.0;
  Interval omega;
  RateCase form = RateCase::cm;
  double K = 0.0;
  double C_p = 0.0;

  double bound(double n) const noexcept { return K / n; }
};

/// Throws UnsupportedError for activations without a proved constant
/// (anything that is neither C^2, softsign nor ELU).
RateBound bound_constant(const Activation& act, double p, Interval omega);

struct RateRecord {
  double n = 0.0;
  double total_norm = 0.0;
  double measured_error = 0.0;
  double bound = 0.0;
  bool pass = false;
  /// max |h_n - rho'| over nodes with x >= 0.
  double max_error_nonneg = 0.0;
};

inline constexpr double kRateSlack = 1e-6;

/// Measures lp_error(h_n, rho') on a grid over omega (with panel breakpoints
/// at the kink preimages of h_n) for each n.
std::vector<RateRecord> verify_rate(const Activation& act, double p, Interval omega,
                                    const std::vector<double>& ns, const Resolution& res,
                                    Exec exec = Exec::parallel);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sobnet
