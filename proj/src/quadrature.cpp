#include "amoebakit/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"

namespace amoebakit {

namespace {

struct Accumulator {
  double sum = 0.0, comp = 0.0;  // Neumaier compensated sum
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double total() const { return sum + comp; }
};

struct SliceResult {
  Accumulator all, even;
  int perturbed = 0;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes_per_axis < 2) throw UsageError("quadrature needs at least 2 nodes per axis");
  if (axes < 1) throw UsageError("quadrature needs at least one axis");
}

double QuadratureSpec::step() const { return 2.0 * std::numbers::pi / nodes_per_axis; }

PeriodicMean periodic_mean_estimate(const TorusIntegrand& g, const QuadratureSpec& spec) {
  spec.validate();
  const int n = spec.nodes_per_axis;
  const int m = spec.axes;
  const double dt = spec.step();
  // one work item per index of the first axis
  std::vector<SliceResult> slices(static_cast<std::size_t>(n));
  parallel_for(slices.size(), [&](std::size_t first) {
    SliceResult& out = slices[first];
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    idx[0] = static_cast<int>(first);
    std::vector<double> theta(static_cast<std::size_t>(m));
    while (true) {
      for (int j = 0; j < m; ++j) theta[j] = dt * idx[j];
      double v = g(theta);
      if (!std::isfinite(v)) {
        for (int j = 0; j < m; ++j) theta[j] += 0.5 * dt;
        v = g(theta);
        if (!std::isfinite(v)) {
          std::string where;
          for (int j = 0; j < m; ++j) where += (j ? "," : "") + std::to_string(idx[j]);
          throw NumericError("singular quadrature node (" + where + ") after perturbation");
        }
        ++out.perturbed;
      }
      out.all.add(v);
      bool even = true;
      for (int j = 0; j < m; ++j) even = even && (idx[j] % 2 == 0);
      if (even) out.even.add(v);
      int j = 1;
      while (j < m && ++idx[j] == n) idx[j++] = 0;
      if (j >= m) break;
    }
  });
  Accumulator all, even;
  int perturbed = 0;
  for (const auto& s : slices) {
    all.add(s.all.total());
    even.add(s.even.total());
    perturbed += s.perturbed;
  }
  PeriodicMean r;
  const double total_nodes = std::pow(static_cast<double>(n), m);
  r.value = all.total() / total_nodes;
  if (n % 2 == 0) {
    r.coarse = even.total() / std::pow(static_cast<double>(n / 2), m);
  } else {
    r.coarse = r.value;
  }
  r.error_estimate = std::fabs(r.value - r.coarse);
  r.perturbed_nodes = perturbed;
  return r;
}

double periodic_mean(const TorusIntegrand& g, const QuadratureSpec& spec) {
  return periodic_mean_estimate(g, spec).value;
}

}  // namespace amoebakit
