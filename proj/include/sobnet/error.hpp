#pragma once

#include <stdexcept>
#include <string>

namespace sobnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input or layer dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A sampled function produced a non-finite value at a quadrature node.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// A constructive search (covering net, projection net) did not succeed.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double best)
      : Error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

/// Requested case is outside what the library handles (dimension, rate case).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DegenerateActivationError : public Error {
 public:
  using Error::Error;
};

class ExperimentError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobnet
