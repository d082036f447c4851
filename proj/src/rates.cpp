#include "sobnet/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sobnet/constructions.hpp"
#include "sobnet/error.hpp"
#include "sobnet/network.hpp"
#include "sobnet/sobolev.hpp"

namespace sobnet {

std::string_view rate_case_name(RateCase c) noexcept {
  switch (c) {
    case RateCase::cm: return "Cm-case";
    case RateCase::softsign: return "softsign-case";
    case RateCase::elu: return "ELU-case";
  }
  return "?";
}

RateBound bound_constant(const Activation& act, double p, Interval omega) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must lie in [1, inf]");
  if (!(omega.hi > omega.lo)) throw std::invalid_argument("empty domain");
  RateBound rb;
  rb.activation = std::string(act.name());
  rb.p = p;
  rb.omega = omega;
  const bool inf = std::isinf(p);
  switch (act.kind()) {
    case ActivationKind::softsign: {
      // Bounds hold on all of R, so Omega drops out.
      rb.form = RateCase::softsign;
      const double c = 64.0 / 27.0;
      rb.K = inf ? c : std::pow((2.0 + 2.0 * std::pow(c, p)) / (3.0 * p - 1.0), 1.0 / p);
      break;
    }
    case ActivationKind::elu:
      rb.form = RateCase::elu;
      rb.K = inf ? 1.0 : std::pow(1.0 / (p + 1.0) + 1.0 / (std::pow(2.0, p) * p), 1.0 / p);
      break;
    default: {
      if (act.smoothness().m < 2) {
        throw UnsupportedError("no proved rate constant for activation " +
                               std::string(act.name()));
      }
      rb.form = RateCase::cm;
      // rho'' on Omega enlarged by 1 to the right covers every x + 1/n.
      const double sup2 = sup_abs_derivative(act, 2, omega.lo, omega.hi + 1.0);
      rb.K = 0.5 * sup2;
      if (!inf) rb.K *= std::pow(omega.hi - omega.lo, 1.0 / p);
      break;
    }
  }
  rb.C_p = 2.0 * rb.K;
  return rb;
}

std::vector<RateRecord> verify_rate(const Activation& act, double p, Interval omega,
                                    const std::vector<double>& ns, const Resolution& res,
                                    Exec exec) {
  const RateBound rb = bound_constant(act, p, omega);
  std::vector<RateRecord> out;
  out.reserve(ns.size());
  for (double n : ns) {
    const Network net = diff_quotient_net(n);
    std::vector<double> bps;
    for (double kink : act.kinks()) {
      bps.push_back(kink);
      bps.push_back(kink - 1.0 / n);
    }
    std::sort(bps.begin(), bps.end());
    const QuadratureGrid grid = make_grid(std::span(&omega, 1), res, {bps});

    std::vector<double> e(grid.size());
    for_each_node(grid.size(), exec, [&](std::size_t i) {
      const auto x = grid.point(i);
      e[i] = realize_scalar(net, act, x) - act.derivative(x[0]);
    });
    RateRecord r;
    r.n = n;
    r.total_norm = total_norm(net);
    r.measured_error = lp_norm_of_samples(e, grid.weights(), p);
    r.bound = rb.bound(n);
    r.pass = r.measured_error <= r.bound + kRateSlack;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.point(i)[0] >= 0.0) r.max_error_nonneg = std::max(r.max_error_nonneg, std::abs(e[i]));
    }
    out.push_back(r);
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope needs at least two paired samples");
  }
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log of nonpositive value");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace sobnet
