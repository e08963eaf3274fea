#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amoebakit/grid.hpp"
#include "amoebakit/laurent.hpp"
#include "amoebakit/quadrature.hpp"

namespace amoebakit {

/// Mean of log|P(exp(y + i theta))| over the torus by the uniform rule with
/// quad.nodes_per_axis nodes on each of the n axes (quad.axes is ignored).
double ronkin_value(const LaurentPolynomial& p, std::span<const double> y, const QuadratureSpec& quad);

/// Same rule, with the result on the even nodes.
PeriodicMean ronkin_value_estimate(const LaurentPolynomial& p, std::span<const double> y, const QuadratureSpec& quad);

struct RonkinOptions {
  bool refine = false;    // double N per cell until err_est <= target or N reaches cap
  double target = 1e-6;
  int cap = 8192;
};

struct RonkinField {
  GridSpec spec;
  std::vector<double> values;
  std::vector<double> err_est;       // |value_N - value_{N/2}|
  std::vector<std::uint8_t> capped;  // refinement stopped at the cap above target
  int quad_N = 0;
  std::vector<int> jensen_axes;  // axes integrated in closed form
};

/// N_P at every cell center. In one variable this is the torus rule. With
/// n >= 2, for each axis the mean over that argument is taken exactly from
/// the roots (Jensen's formula) and the other n-1 arguments use the torus
/// rule; the field is the average over the n axes.
RonkinField ronkin_field(const LaurentPolynomial& p, const GridSpec& spec, const QuadratureSpec& quad,
                         const RonkinOptions& opts = {});

/// n values per cell: central differences inside, one-sided on the edges.
std::vector<double> gradient_field(const RonkinField& field);

struct MassGrid {
  GridSpec spec;
  std::vector<double> mass;  // zero on window-boundary cells
  double total = 0.0;
  double min_mass = 0.0;     // most negative cell (quadrature noise)
};

/// Sum of axis second differences / h^2 times the cell volume h^n. The
/// divisor of z - a in one variable has total mass 1.
MassGrid laplacian_mass(const RonkinField& field);

struct SupportReport {
  double outside_mass_fraction = 0.0;
  std::size_t uncovered_amoeba_cells = 0;
  std::size_t amoeba_cells = 0;
  std::size_t mass_cells = 0;
  int hausdorff_cells = 0;  // -1 when exactly one of the two sets is empty
};

/// Compares the cells carrying mass above tau_mass with the amoeba raster,
/// in Chebyshev cell distance with a tolerance of 2 cells.
SupportReport support_compare(const MassGrid& mass, const GridRegion& amoeba, double tau_mass = 1e-6);

struct ConvexitySweep {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // most negative second difference / (1 + |value|)
};

/// Second differences along the axes and the 2D diagonals at every cell
/// where the stencil fits; a violation is one below -tol (1 + |value|).
ConvexitySweep convexity_sweep(const RonkinField& field, double tol = 1e-6);

struct ComponentFit {
  std::size_t cells_used = 0;
  bool window_truncated = false;
  std::vector<double> gradient;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least squares affine fit of the field over each complement component of
/// the raster, after dropping cells within `erosion` cells of the rest of
/// the grid. Components with fewer than n + 1 cells left get an empty fit
/// (cells_used == 0). Order follows complement_components.
std::vector<ComponentFit> component_fits(const RonkinField& field, const GridRegion& amoeba, int erosion = 2);

}  // namespace amoebakit
