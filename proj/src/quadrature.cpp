#include "sobnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sobnet/error.hpp"

namespace sobnet {

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  if (n == 1) return {{0.0}, {2.0}};
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureGrid::QuadratureGrid(std::size_t dim, std::vector<double> points,
                               std::vector<double> weights, std::vector<double> offsets)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)),
      offsets_(std::move(offsets)) {}

namespace {

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
  double offset = 0.0;
};

AxisRule axis_rule(Interval iv, std::size_t axis, const Resolution& res,
                   const GaussLegendreRule& gl, std::span<const double> extra) {
  const double h = (iv.hi - iv.lo) / static_cast<double>(res.panels);
  const double offset = std::min((axis + 1) * std::numbers::sqrt2 * 1e-7,
                                 h * 1e-3 / std::numbers::sqrt3);
  std::vector<double> bp;
  bp.reserve(res.panels + 1 + extra.size());
  bp.push_back(iv.lo);
  for (std::size_t j = 1; j < res.panels; ++j) bp.push_back(iv.lo + j * h + offset);
  bp.push_back(iv.hi);
  for (double e : extra) {
    if (!(e > iv.lo && e < iv.hi)) continue;
    auto it = std::lower_bound(bp.begin(), bp.end(), e);
    // Nearest interior uniform breakpoint.
    auto nearest = it;
    if (it == bp.end() || (it != bp.begin() && e - *(it - 1) < *it - e)) nearest = it - 1;
    const bool interior = nearest != bp.begin() && nearest != bp.end() - 1;
    if (interior && std::abs(*nearest - e) < 0.25 * h) {
      *nearest = e;
    } else if (*nearest != e) {
      bp.insert(it, e);
    }
    std::sort(bp.begin(), bp.end());
  }
  AxisRule out;
  out.offset = offset;
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double a = bp[p];
    const double b = bp[p + 1];
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      out.x.push_back(mid + half * gl.nodes[q]);
      out.w.push_back(half * gl.weights[q]);
    }
  }
  return out;
}

}  // namespace

QuadratureGrid make_grid(const Box& box, const Resolution& res) {
  if (!(box.B > 0.0)) throw std::invalid_argument("box half-width must be positive");
  std::vector<Interval> axes(box.d, Interval{-box.B, box.B});
  return make_grid(axes, res);
}

QuadratureGrid make_grid(std::span<const Interval> axes, const Resolution& res,
                         const std::vector<std::vector<double>>& breakpoints) {
  const std::size_t d = axes.size();
  if (d == 0) throw std::invalid_argument("grid needs at least one axis");
  if (d > 3) throw UnsupportedError("quadrature grids support d <= 3, got d = " + std::to_string(d));
  if (res.panels < 1 || res.nodes < 2) {
    throw std::invalid_argument("resolution needs >= 1 panel and >= 2 nodes per panel");
  }
  const GaussLegendreRule gl = gauss_legendre(res.nodes);
  std::vector<AxisRule> rules;
  std::vector<double> offsets;
  for (std::size_t a = 0; a < d; ++a) {
    if (!(axes[a].hi > axes[a].lo)) throw std::invalid_argument("empty grid axis");
    std::span<const double> extra;
    if (a < breakpoints.size()) extra = breakpoints[a];
    rules.push_back(axis_rule(axes[a], a, res, gl, extra));
    offsets.push_back(rules.back().offset);
  }
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.x.size();
  std::vector<double> points;
  std::vector<double> weights;
  points.reserve(total * d);
  weights.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      points.push_back(rules[a].x[idx[a]]);
      w *= rules[a].w[idx[a]];
    }
    weights.push_back(w);
    // Last axis varies fastest.
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < rules[a].x.size()) break;
      idx[a] = 0;
    }
  }
  return QuadratureGrid(d, std::move(points), std::move(weights), std::move(offsets));
}

}  // namespace sobnet
