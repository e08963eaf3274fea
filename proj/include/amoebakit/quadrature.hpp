#pragma once

#include <functional>
#include <span>

namespace amoebakit {

/// Uniform tensor grid theta_k = 2 pi k / N on [0, 2 pi)^axes.
struct QuadratureSpec {
  int nodes_per_axis = 256;
  int axes = 1;

  void validate() const;
  double step() const;
};

using TorusIntegrand = std::function<double(std::span<const double>)>;

struct PeriodicMean {
  double value = 0.0;       // N-node rule
  double coarse = 0.0;      // N/2-node rule (the even nodes); equals value when N is odd
  double error_estimate = 0.0;  // |value - coarse|
  int perturbed_nodes = 0;
};

/// Rectangle rule mean of g over the torus. A node where g is not finite is
/// moved by half a cell diagonal once; if g is still not finite there a
/// NumericError naming the node is thrown.
double periodic_mean(const TorusIntegrand& g, const QuadratureSpec& spec);

/// Same rule, also reporting the N/2 result and their difference.
PeriodicMean periodic_mean_estimate(const TorusIntegrand& g, const QuadratureSpec& spec);

}  // namespace amoebakit
