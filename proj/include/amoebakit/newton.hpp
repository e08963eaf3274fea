#pragma once

#include <functional>
#include <span>
#include <vector>

#include "amoebakit/linalg.hpp"

namespace amoebakit {

/// Fills F(x) and its Jacobian J (rows = equations). J is pre-sized to
/// m x m for an m-dimensional x.
using SystemFn = std::function<void(std::span<const cplx> x, std::vector<cplx>& f, CMatrix& jac)>;

struct NewtonResult {
  std::vector<cplx> x;     // last iterate
  double residual = 0.0;   // ||F(x)||_inf
  int iterations = 0;
  bool converged = false;
  bool singular = false;   // stopped on a singular Jacobian
  double condition = 0.0;  // infinity-norm condition of J at x
};

/// Damped Newton: full steps, halved until ||F||_inf decreases.
NewtonResult newton_polish(const SystemFn& system, std::vector<cplx> x0, int max_iter = 50, double tol = 1e-12);

}  // namespace amoebakit
