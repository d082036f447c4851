#include "sobnet/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sobnet/error.hpp"

namespace sobnet {

namespace {

constexpr int kCoverSamples = 10001;

Layer row_layer(std::size_t d, std::size_t axis, double a, double b) {
  std::vector<double> w(d, 0.0);
  w[axis] = a;
  return make_layer(1, d, std::move(w), {b});
}

// Smallest |rho'| over [lo, hi], sampled.
double min_abs_slope(const Activation& act, double lo, double hi) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    m = std::min(m, std::abs(act.derivative(lo + (hi - lo) * i / 400.0)));
  }
  return m;
}

}  // namespace

Network diff_quotient_net(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("n must be positive");
  return Network({make_layer(2, 1, {1.0, 1.0}, {1.0 / n, 0.0}),
                  make_layer(1, 2, {n, -n}, {0.0})});
}

Network covering_net_J(const Activation& act, std::size_t d, std::size_t L, double B,
                       double D) {
  if (d < 1) throw std::invalid_argument("covering net needs d >= 1");
  if (L < 2) throw std::invalid_argument("covering net needs L >= 2");
  if (!(B > 0.0) || !(D > 0.0)) throw std::invalid_argument("B and D must be positive");
  if (L == 2) return Network({row_layer(d, 0, D / B, 0.0)});
  if (act.smoothness().m < 1) {
    throw UnsupportedError(std::string("covering network needs a C^1 activation, got ") +
                           std::string(act.name()));
  }

  const double z0 = find_z0(act);
  const double r0 = std::abs(act.derivative(z0));
  double w = 1.0;
  int halvings = 0;
  while (min_abs_slope(act, z0 - w, z0 + w) < 0.5 * r0) {
    if (++halvings > 50) throw ConstructionError("no monotone window around z0", 0.0);
    w *= 0.5;
  }
  double lo = act.value(z0 - w);
  double hi = act.value(z0 + w);
  if (lo > hi) std::swap(lo, hi);

  std::vector<Layer> layers;
  layers.push_back(row_layer(d, 0, w / B, z0));
  for (std::size_t l = 2; l < L - 1; ++l) {
    const double a = 2.0 * w / (hi - lo);
    layers.push_back(make_layer(1, 1, {a}, {z0 - w - a * lo}));
  }
  const double target = D * (1.0 + 1e-6);
  const double a = 2.0 * target / (hi - lo);
  layers.push_back(make_layer(1, 1, {a}, {-target - a * lo}));
  Network J(std::move(layers));

  double jmin = std::numeric_limits<double>::infinity();
  double jmax = -jmin;
  std::vector<double> x(d, 0.0);
  for (int i = 0; i < kCoverSamples; ++i) {
    x[0] = -B + 2.0 * B * i / (kCoverSamples - 1);
    const double y = realize_scalar(J, act, x);
    jmin = std::min(jmin, y);
    jmax = std::max(jmax, y);
  }
  if (jmin > -D || jmax < D) {
    std::ostringstream msg;
    msg << "covering net range [" << jmin << ", " << jmax << "] does not contain [-" << D
        << ", " << D << "]";
    throw ConstructionError(msg.str(), std::min(-jmin, jmax));
  }
  return J;
}

Thm1Sequence thm1_sequence(const Activation& act, std::size_t d, std::size_t L, double B,
                           double n, double D) {
  if (act.smoothness().m < 1) {
    throw UnsupportedError("the difference-quotient sequence needs m >= 1");
  }
  Network J = covering_net_J(act, d, L, B, D);
  Network net = concat(diff_quotient_net(n), J);

  TargetFunction t;
  t.kind = TargetKind::rho_prime_of_J;
  t.description = std::string("rho' o J, rho = ") + std::string(act.name());
  t.jets = [J, act](std::span<const double> x, std::span<const double> dir, int order) {
    const Jet inner = realize_jet(J, act, x, dir, order);
    const Jet outer = act.eval_jet(inner.value(), order + 1);
    std::vector<double> shifted(order + 1);
    for (int j = 0; j <= order; ++j) shifted[j] = outer.derivative(j + 1);
    return compose(shifted, inner);
  };
  t.value = [J, act](std::span<const double> x) {
    return act.derivative(realize_scalar(J, act, x));
  };

  std::vector<std::vector<double>> bps;
  if (L == 2) {
    const double a = D / B;
    std::vector<double> axis0;
    for (double kink : act.kinks()) {
      axis0.push_back(kink / a);
      axis0.push_back((kink - 1.0 / n) / a);
    }
    std::sort(axis0.begin(), axis0.end());
    bps.push_back(std::move(axis0));
  }
  return {std::move(net), std::move(J), std::move(t), std::move(bps)};
}

TargetFunction projection_target(std::size_t axis) {
  TargetFunction t;
  t.kind = TargetKind::projection;
  t.description = "P_" + std::to_string(axis + 1);
  t.jets = [axis](std::span<const double> x, std::span<const double> dir, int order) {
    return Jet::variable(x[axis], dir[axis], order);
  };
  t.value = [axis](std::span<const double> x) { return x[axis]; };
  return t;
}

ProjectionResult projection_net(const Activation& act, std::size_t d, std::size_t L,
                                std::size_t axis, double B, int k, double p, double eps,
                                const Resolution& res) {
  if (L < 1) throw std::invalid_argument("projection net needs L >= 1");
  if (axis >= d) throw ShapeError("projection axis outside input dimension");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!act.smoothness().analytic) {
    throw UnsupportedError("projection networks need an analytic activation");
  }
  const QuadratureGrid grid = make_grid(Box{B, d}, res);
  const JetField target = projection_target(axis).jets;

  ProjectionResult out{Network({row_layer(d, axis, 1.0, 0.0)}), 0.0, 0.0, {}};
  if (L == 1) {
    out.error = sobolev_error(network_jets(out.net, act), target, k, p, grid);
    return out;
  }

  const double z0 = find_z0(act);
  const double r = act.derivative(z0);
  const double v = act.value(z0);
  double best = std::numeric_limits<double>::infinity();
  for (double C = 1.0; C <= 1e12; C *= 2.0) {
    const Layer back = make_layer(1, 1, {C / r}, {-C * v / r});
    Network net({row_layer(d, axis, 1.0 / C, z0), back});
    const Network phi2({make_layer(1, 1, {1.0 / C}, {z0}), back});
    for (std::size_t j = 2; j < L; ++j) net = concat(phi2, net);
    const double err = sobolev_error(network_jets(net, act), target, k, p, grid);
    out.trace.emplace_back(C, err);
    best = std::min(best, err);
    if (err <= eps) {
      out.net = std::move(net);
      out.C = C;
      out.error = err;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "projection net did not reach eps = " << eps << " before C = 1e12 (best " << best
      << ")";
  throw ConstructionError(msg.str(), best);
}

Network thm2_head(const Activation& act, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("n must be positive");
  const double z0 = find_z0(act);
  return Network({make_layer(2, 1, {1.0, 1.0 / n}, {0.0, z0}),
                  make_layer(1, 2, {1.0, n}, {-n * act.value(z0)})});
}

TargetFunction analytic_target(const Activation& act) {
  const double z0 = find_z0(act);
  const double slope = act.derivative(z0);
  TargetFunction t;
  t.kind = TargetKind::analytic_F;
  t.description = std::string("rho(x1) + rho'(z0) x1, rho = ") + std::string(act.name());
  t.jets = axis_field(
      [act, slope](double x, int order) {
        Jet j = act.eval_jet(x, order);
        j.add_scaled(slope, Jet::variable(x, 1.0, order));
        return j;
      },
      0);
  t.value = [act, slope](std::span<const double> x) { return act.value(x[0]) + slope * x[0]; };
  return t;
}

Thm2Sequence thm2_sequence(const Activation& act, std::size_t d, std::size_t L, double B, int k,
                           double p, double n, const Resolution& res) {
  if (L < 2) throw std::invalid_argument("the analytic sequence needs L >= 2");
  if (!act.smoothness().analytic || !act.smoothness().bounded) {
    throw UnsupportedError("the analytic sequence needs a bounded analytic activation");
  }
  const Network head = thm2_head(act, n);
  ProjectionResult proj = projection_net(act, d, L - 1, 0, B, k, p, 1.0 / n, res);
  Thm2Sequence s{concat(head, proj.net),
                 concat(head, Network({row_layer(d, 0, 1.0, 0.0)})),
                 analytic_target(act), proj.C};
  return s;
}

}  // namespace sobnet
