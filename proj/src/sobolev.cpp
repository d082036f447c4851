#include "sobnet/sobolev.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sobnet/constructions.hpp"
#include "sobnet/error.hpp"

namespace sobnet {

namespace {

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must lie in [1, inf]");
}

void check_finite(std::span<const double> e) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!std::isfinite(e[i])) {
      throw EvaluationError("non-finite sample at quadrature node " + std::to_string(i), i);
    }
  }
}

}  // namespace

double lp_norm_of_samples(std::span<const double> errors, std::span<const double> weights,
                          double p) {
  check_p(p);
  if (errors.size() != weights.size()) throw ShapeError("sample and weight counts differ");
  check_finite(errors);
  if (std::isinf(p)) {
    double m = 0.0;
    for (double e : errors) m = std::max(m, std::abs(e));
    return m;
  }
  std::vector<double> terms(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double a = std::abs(errors[i]);
    double ap;
    if (p == 1.0) {
      ap = a;
    } else if (p == 2.0) {
      ap = a * a;
    } else {
      ap = std::pow(a, p);
    }
    terms[i] = weights[i] * ap;
  }
  const double s = pairwise_sum(terms);
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

double lp_error(const ScalarField& f, const ScalarField& g, double p,
                const QuadratureGrid& grid, Exec exec) {
  check_p(p);
  std::vector<double> e(grid.size());
  for_each_node(grid.size(), exec, [&](std::size_t i) {
    const auto x = grid.point(i);
    e[i] = f(x) - g(x);
  });
  return lp_norm_of_samples(e, grid.weights(), p);
}

std::vector<double> sobolev_terms(const JetField& f, const JetField& g, int k, double p,
                                  const QuadratureGrid& grid, Exec exec) {
  check_p(p);
  const PartialsEvaluator pe(grid.dim(), k);
  const std::size_t na = pe.size();
  const std::size_t nn = grid.size();
  // Node-major scratch; each node owns its row.
  std::vector<double> diff(nn * na);
  for_each_node(nn, exec, [&](std::size_t i) {
    const auto x = grid.point(i);
    std::vector<double> a(na);
    std::vector<double> b(na);
    pe.evaluate(f, x, a);
    pe.evaluate(g, x, b);
    for (std::size_t j = 0; j < na; ++j) diff[i * na + j] = a[j] - b[j];
  });
  std::vector<double> terms(na);
  std::vector<double> column(nn);
  for (std::size_t j = 0; j < na; ++j) {
    for (std::size_t i = 0; i < nn; ++i) column[i] = diff[i * na + j];
    terms[j] = lp_norm_of_samples(column, grid.weights(), p);
  }
  return terms;
}

double sobolev_error(const JetField& f, const JetField& g, int k, double p,
                     const QuadratureGrid& grid, Exec exec) {
  double s = 0.0;
  for (double t : sobolev_terms(f, g, k, p, grid, exec)) s += t;
  return s;
}

double sobolev_error(const JetField& f, const JetField& g, const SobolevSpec& spec, Exec exec) {
  return sobolev_error(f, g, spec.k, spec.p, make_grid(spec.box, spec.resolution), exec);
}

double diff_quotient_error(const Activation& act, int l, double n, double p,
                           const QuadratureGrid& grid, Exec exec) {
  if (grid.dim() != 1) throw ShapeError("difference quotients are univariate");
  if (l < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (!(n > 0.0)) throw std::invalid_argument("n must be positive");
  // Evaluated through the (1,2,1) network so that the difference is formed
  // in extended precision, as in the rate checks.
  const Network h = diff_quotient_net(n);
  const ScalarField e = [&](std::span<const double> x) {
    const double hn = l == 0 ? realize_scalar(h, act, x) : realize_jet(h, act, x, 0, l).derivative(l);
    return hn - act.eval_jet(x[0], l + 1).derivative(l + 1);
  };
  const ScalarField zero = [](std::span<const double>) { return 0.0; };
  return lp_error(e, zero, p, grid, exec);
}

ScalarField network_scalar(const Network& net, const Activation& act) {
  return [net, act](std::span<const double> x) { return realize_scalar(net, act, x); };
}

JetField network_jets(const Network& net, const Activation& act) {
  return [net, act](std::span<const double> x, std::span<const double> dir, int order) {
    return realize_jet(net, act, x, dir, order);
  };
}

JetField axis_field(std::function<Jet(double, int)> g, std::size_t axis) {
  return [g = std::move(g), axis](std::span<const double> x, std::span<const double> dir,
                                  int order) {
    if (axis >= x.size()) throw ShapeError("axis outside point dimension");
    const Jet inner = Jet::variable(x[axis], dir[axis], order);
    if (order == 0) return g(x[axis], 0);
    if (dir[axis] == 0.0) return Jet::constant(g(x[axis], 0).value(), order);
    const Jet outer = g(x[axis], order);
    const auto d = outer.derivatives();
    return compose(d, inner);
  };
}

}  // namespace sobnet
