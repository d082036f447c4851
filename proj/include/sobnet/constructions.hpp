#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sobnet/activation.hpp"
#include "sobnet/network.hpp"
#include "sobnet/quadrature.hpp"
#include "sobnet/sobolev.hpp"

namespace sobnet {

enum class TargetKind { rho_prime_of_J, analytic_F, projection, synthetic };

/// A non-network target: jets for Sobolev errors plus a pointwise evaluator
/// computed independently of the jets.
struct TargetFunction {
  TargetKind kind = TargetKind::synthetic;
  std::string description;
  JetField jets;
  ScalarField value;
};

/// (1,2,1) network realizing h_n(x) = n rho(x + 1/n) - n rho(x).
Network diff_quotient_net(double n);

/// Covering network J: (d,1,...,1) with L-1 layers whose realization on
/// [-B,B]^d covers [-D,D] (it depends on x_1 only). For L = 2 this is the
/// affine map (D/B) x_1; deeper nets route x_1 through windows where rho is
/// strictly monotone. Throws ConstructionError when the sampled range misses
/// [-D,D], UnsupportedError for activations with m = 0 and L > 2.
Network covering_net_J(const Activation& act, std::size_t d, std::size_t L, double B,
                       double D = 1.0);

struct Thm1Sequence {
  Network net;  // concat(h_n, J)
  Network J;
  TargetFunction target;  // rho' o J
  /// Panel breakpoints along x_1 at kink preimages of net (only for affine J).
  std::vector<std::vector<double>> breakpoints;
};

Thm1Sequence thm1_sequence(const Activation& act, std::size_t d, std::size_t L, double B,
                           double n, double D = 1.0);

/// P_i(x) = x_axis as a target.
TargetFunction projection_target(std::size_t axis);

struct ProjectionResult {
  Network net;
  double C = 0.0;
  double error = 0.0;
  /// (C, measured error) for every tried C.
  std::vector<std::pair<double, double>> trace;
};

/// L-layer (d,1,...,1) network whose realization is within eps of P_axis in
/// W^{k,p}([-B,B]^d): Phi_2^C o ... o Phi_2^C o Phi_1^C with C doubled from 1.
/// L = 1 returns the exact affine projection. Throws ConstructionError once
/// C would exceed 1e12.
ProjectionResult projection_net(const Activation& act, std::size_t d, std::size_t L,
                                std::size_t axis, double B, int k, double p, double eps,
                                const Resolution& res);

/// Phi_n^1: (1,2,1) with realization rho(x) + n rho(x/n + z0) - n rho(z0).
Network thm2_head(const Activation& act, double n);

/// F(x) = rho(x_1) + rho'(z0) x_1.
TargetFunction analytic_target(const Activation& act);

struct Thm2Sequence {
  Network net;        // concat(Phi_n^1, projection approximant)
  Network reference;  // concat(Phi_n^1, exact projection)
  TargetFunction target;
  double C = 0.0;
};

Thm2Sequence thm2_sequence(const Activation& act, std::size_t d, std::size_t L, double B, int k,
                           double p, double n, const Resolution& res);

}  // namespace sobnet
