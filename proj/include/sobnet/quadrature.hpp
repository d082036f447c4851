#pragma once

#include <span>
#include <vector>

namespace sobnet {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t n);

/// The box [-B, B]^d.
struct Box {
  double B = 1.0;
  std::size_t d = 1;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Composite rule resolution: panels per axis, Gauss nodes per panel.
struct Resolution {
  std::size_t panels = 2000;
  std::size_t nodes = 5;
};

/// Tensor-product composite Gauss-Legendre grid.
///
/// Interior panel breakpoints are shifted by an irrational per-axis offset
/// (a multiple of sqrt(2) * 1e-7, capped at panel / 1e3) so that no node sits
/// on a rational kink preimage; the outer endpoints stay fixed, so the grid
/// integrates over exactly the requested box.
class QuadratureGrid {
 public:
  QuadratureGrid(std::size_t dim, std::vector<double> points, std::vector<double> weights,
                 std::vector<double> offsets);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {points_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Breakpoint shift used on each axis.
  std::span<const double> offsets() const noexcept { return offsets_; }

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> offsets_;
};

/// Grid on [-B, B]^d. Throws UnsupportedError for d > 3.
QuadratureGrid make_grid(const Box& box, const Resolution& res);

/// Grid on a product of intervals. `breakpoints[a]`, when given, lists extra
/// panel boundaries for axis a (e.g. known kink preimages); a uniform
/// breakpoint closer than a quarter panel to one of them is replaced by it.
QuadratureGrid make_grid(std::span<const Interval> axes, const Resolution& res,
                         const std::vector<std::vector<double>>& breakpoints = {});

}  // namespace sobnet
