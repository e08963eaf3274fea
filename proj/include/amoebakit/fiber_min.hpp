#pragma once

#include <span>
#include <vector>

#include "amoebakit/laurent.hpp"
#include "amoebakit/quadrature.hpp"

namespace amoebakit {

struct FiberMinOptions {
  int coarse_nodes = 32;   // grid nodes per angle axis for the scan
  int descent_steps = 40;  // Levenberg-Marquardt iterations per start
  int starts = 4;          // best coarse cells refined locally
};

struct FiberMin {
  double min_modulus = 0.0;
  std::vector<double> theta;  // argmin in [0, 2 pi)^n
};

/// Estimate of min over theta of |P(exp(y + i theta))|: coarse grid scan,
/// then damped Gauss-Newton descent on the torus from the best cells. The
/// result never exceeds any value probed. Ties between grid nodes go to
/// the lowest lexicographic index.
FiberMin fiber_minimize(const LaurentPolynomial& p, std::span<const double> y, const FiberMinOptions& opts = {});

}  // namespace amoebakit
