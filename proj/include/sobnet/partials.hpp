#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sobnet/jet.hpp"

namespace sobnet {

/// Jet of t -> f(x + t * direction) truncated at `order`.
using JetField =
    std::function<Jet(std::span<const double> x, std::span<const double> direction, int order)>;

using MultiIndex = std::vector<int>;

/// All multi-indices alpha in N^d with |alpha| <= k, grouped by |alpha| and
/// lexicographically descending inside each group: for d = 2, k = 2 this is
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
std::vector<MultiIndex> multi_indices(std::size_t d, int k);

/// Mixed partials D^alpha f(x), |alpha| <= k, from univariate directional jets.
///
/// For each total order r the r-th directional derivative along an integer
/// direction beta with |beta| = r is sum_alpha r!/alpha! beta^alpha D^alpha f.
/// Taking one direction per multi-index of order r gives a square system
/// whose inverse is precomputed here; d = 1 needs a single jet.
class PartialsEvaluator {
 public:
  PartialsEvaluator(std::size_t d, int k);

  std::size_t dim() const noexcept { return d_; }
  int order() const noexcept { return k_; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

  struct Block {
    int r = 0;
    /// Position in indices() of the first multi-index of order r.
    std::size_t first = 0;
    std::size_t count = 0;
    /// One direction per multi-index of order r (row-major, count x d).
    std::vector<double> directions;
    /// inverse[a * count + b]: weight of direction b's r-th derivative in D^alpha_a.
    std::vector<double> inverse;
  };
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  /// D^alpha f(x) in indices() order.
  std::vector<double> evaluate(const JetField& f, std::span<const double> x) const;
  void evaluate(const JetField& f, std::span<const double> x, std::span<double> out) const;

 private:
  std::size_t d_;
  int k_;
  std::vector<MultiIndex> indices_;
  std::vector<Block> blocks_;
};

}  // namespace sobnet
