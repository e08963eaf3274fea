#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amoebakit/laurent.hpp"

namespace amoebakit {

/// Where the unsolved coordinates of a fiber are sampled: log-moduli on a
/// uniform grid per axis, arguments on a uniform grid of `arg_nodes` points
/// shifted by `phase` cells.
struct FiberGrid {
  std::vector<double> lo, hi;  // log-modulus window per axis
  double step = 0.01;
  int arg_nodes = 1024;
  double phase = 0.0;  // in [0, 1)

  void validate(int n) const;
  /// Window of the grid extended by `margin` on every side.
  static FiberGrid around(std::span<const double> lo, std::span<const double> hi, double margin, double step,
                          int arg_nodes, double phase);
};

/// Argument offset in [0, 1) derived from a seed.
double phase_from_seed(std::uint64_t seed);

/// Points of Log V, stored flat (n coordinates per point).
struct PointCloud {
  int n = 0;
  std::vector<double> coords;
  std::vector<std::uint8_t> outside;  // point lies outside the sampling window
  std::uint64_t source_hash = 0;
  int axis = -1;  // solved axis (hypersurfaces) or fiber axis (curves); -1 for unions
  std::size_t fibers = 0;
  std::size_t degenerate_fibers = 0;
  FiberGrid grid;

  std::size_t size() const { return n == 0 ? 0 : coords.size() / n; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * n, std::size_t(n)}; }
  void append(const PointCloud& other);
};

/// Solves P for z_axis over every fiber sample of the other coordinates and
/// emits Log of each nonzero root. Fibers where the restriction vanishes
/// identically are skipped and counted; above 1% of them the next axis P
/// varies in is tried. Throws UsageError when P does not involve z_axis.
PointCloud sample_hypersurface(const LaurentPolynomial& p, int axis, const FiberGrid& grid);

/// Union of sample_hypersurface over every axis P varies in. Covers the
/// parts of the amoeba that one solved axis reaches only through very
/// sparse samples. Empty for a monomial.
PointCloud amoeba_cloud(const LaurentPolynomial& p, const FiberGrid& grid);

struct CurveOptions {
  double residual_tol = 1e-8;
  double max_condition = 1e8;
};

/// Points of Log of the curve {P1 = P2 = 0} in three variables, sampled over
/// z_{fiber_axis}. The other two coordinates come from eliminating one of
/// them, solving the resultant and polishing with Newton on (P1, P2).
/// Throws DegenerateError when every fiber sample is degenerate.
PointCloud sample_curve_3d(const LaurentPolynomial& p1, const LaurentPolynomial& p2, const FiberGrid& grid,
                           int fiber_axis = 2, const CurveOptions& opts = {});

/// Union of sample_curve_3d over the three fiber axes; axes where the pair
/// is degenerate throughout are skipped.
PointCloud curve_cloud(const LaurentPolynomial& p1, const LaurentPolynomial& p2, const FiberGrid& grid,
                       const CurveOptions& opts = {});

/// p with its variables reordered: variable j of the result is variable
/// order[j] of p.
LaurentPolynomial permute_variables(const LaurentPolynomial& p, std::span<const int> order);

}  // namespace amoebakit
