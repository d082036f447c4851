#include "sobnet/partials.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sobnet/error.hpp"

namespace sobnet {

namespace {

void enumerate(std::size_t d, int remaining, std::size_t pos, MultiIndex& cur,
               std::vector<MultiIndex>& out) {
  if (pos + 1 == d) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate(d, remaining - v, pos + 1, cur, out);
  }
}

// Gauss-Jordan with partial pivoting; the systems are at most 10 x 10.
std::vector<double> invert(std::vector<double> m, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (m[piv * n + c] == 0.0) throw std::logic_error("singular interpolation system");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m[c * n + j], m[piv * n + j]);
        std::swap(inv[c * n + j], inv[piv * n + j]);
      }
    }
    const double p = m[c * n + c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c * n + j] /= p;
      inv[c * n + j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m[r * n + j] -= f * m[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<MultiIndex> multi_indices(std::size_t d, int k) {
  if (d == 0) throw std::invalid_argument("multi-indices need d >= 1");
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  for (int r = 0; r <= k; ++r) enumerate(d, r, 0, cur, out);
  return out;
}

PartialsEvaluator::PartialsEvaluator(std::size_t d, int k)
    : d_(d), k_(k), indices_(multi_indices(d, k)) {
  if (d > 3) throw UnsupportedError("mixed partials support d <= 3");
  if (k < 0 || k > Jet::kMaxOrder) throw std::invalid_argument("bad Sobolev order");
  std::size_t pos = 0;
  for (int r = 0; r <= k; ++r) {
    Block b;
    b.r = r;
    b.first = pos;
    while (pos < indices_.size()) {
      int sum = 0;
      for (int v : indices_[pos]) sum += v;
      if (sum != r) break;
      ++pos;
    }
    b.count = pos - b.first;
    const std::size_t n = b.count;
    b.directions.resize(n * d);
    std::vector<double> m(n * n);
    for (std::size_t bi = 0; bi < n; ++bi) {
      const MultiIndex& beta = indices_[b.first + bi];
      for (std::size_t a = 0; a < d; ++a) b.directions[bi * d + a] = beta[a];
      for (std::size_t ai = 0; ai < n; ++ai) {
        const MultiIndex& alpha = indices_[b.first + ai];
        double coef = factorial(r);
        for (std::size_t a = 0; a < d; ++a) {
          coef /= factorial(alpha[a]);
          coef *= std::pow(static_cast<double>(beta[a]), alpha[a]);
        }
        m[bi * n + ai] = coef;
      }
    }
    b.inverse = invert(std::move(m), n);
    blocks_.push_back(std::move(b));
  }
}

std::vector<double> PartialsEvaluator::evaluate(const JetField& f,
                                                std::span<const double> x) const {
  std::vector<double> out(indices_.size());
  evaluate(f, x, out);
  return out;
}

void PartialsEvaluator::evaluate(const JetField& f, std::span<const double> x,
                                 std::span<double> out) const {
  if (x.size() != d_) throw ShapeError("point dimension does not match evaluator");
  if (d_ == 1) {
    const double e1[1] = {1.0};
    const Jet j = f(x, e1, k_);
    for (int r = 0; r <= k_; ++r) out[r] = j.derivative(r);
    return;
  }
  std::vector<double> dir(d_, 0.0);
  std::vector<double> dd;
  for (const Block& b : blocks_) {
    if (b.r == 0) {
      dir.assign(d_, 0.0);
      dir[0] = 1.0;
      out[b.first] = f(x, dir, 0).value();
      continue;
    }
    dd.resize(b.count);
    for (std::size_t bi = 0; bi < b.count; ++bi) {
      dir.assign(b.directions.begin() + bi * d_, b.directions.begin() + (bi + 1) * d_);
      dd[bi] = f(x, dir, b.r).derivative(b.r);
    }
    for (std::size_t ai = 0; ai < b.count; ++ai) {
      double s = 0.0;
      for (std::size_t bi = 0; bi < b.count; ++bi) s += b.inverse[ai * b.count + bi] * dd[bi];
      out[b.first + ai] = s;
    }
  }
}

}  // namespace sobnet
