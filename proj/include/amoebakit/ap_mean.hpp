#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "amoebakit/argument.hpp"
#include "amoebakit/exponential_sum.hpp"
#include "amoebakit/grid.hpp"
#include "amoebakit/laurent.hpp"
#include "amoebakit/quadrature.hpp"

namespace amoebakit {

/// Half-widths s of the averaging cubes (-s, s)^n and the sampling density.
struct LadderSpec {
  std::vector<double> s_values;
  int samples_per_unit = 8;

  /// At least three increasing positive entries spanning a factor of 10.
  void validate() const;
};

struct LadderEntry {
  double s = 0.0;
  double value = 0.0;
};

struct BohrMean {
  double estimate = 0.0;      // value at the largest s
  std::vector<LadderEntry> table;
  double spread = 0.0;        // max - min over the top half of the ladder
  double extrapolated = 0.0;  // a from a least-squares fit a + b/s on the top three entries
  bool torus = false;         // computed exactly as a torus average
};

using RealFn = std::function<double(std::span<const double>)>;

/// Midpoint-rule averages of f over (-s, s)^n with ceil(2 s samples_per_unit)
/// points per axis. A non-finite sample throws NumericError with its location.
BohrMean bohr_mean(const RealFn& f, int n, const LadderSpec& ladder);

/// True when every difference of two frequency vectors is an integer vector.
bool has_integer_frequency_lattice(const ExponentialSum& f);

/// Mean of log|f(x + i y)| over x. Sums on an integer frequency lattice are
/// averaged over one period with the torus rule (`torus_nodes` per axis) and
/// every ladder entry holds that value. Other sums use the ladder; a
/// singular sample moves by half a cell once, then NumericError.
BohrMean mean_log_modulus_ladder(const ExponentialSum& f, std::span<const double> y, const LadderSpec& ladder,
                                 int torus_nodes = 4096);
double mean_log_modulus(const ExponentialSum& f, std::span<const double> y, const LadderSpec& ladder,
                        int torus_nodes = 4096);

struct LocatedZero {
  cplx z;
  int multiplicity = 1;
};

struct ZeroChainSample {
  Box box;
  std::vector<LocatedZero> zeros;
  int count = 0;  // argument count of the box
};

struct ZeroOptions {
  double tol = 1e-7;         // boundary clearance for the argument count
  int max_depth = 60;
  double min_width = 1e-6;   // boxes below this with count >= 2 hold one multiple zero
  int max_multiplicity = 3;
};

/// Zeros of a one-variable sum in the box, by bisection guided by the
/// argument count and Newton polishing of isolated zeros.
ZeroChainSample zeros_in_box(const ExponentialSum& f, const Box& box, const ZeroOptions& opts = {});

struct DensityEntry {
  double s = 0.0;
  long count = 0;
  double estimate = 0.0;  // count / (2 s)
};

struct DensityEstimate {
  double g0 = 0.0, g1 = 0.0;
  std::vector<DensityEntry> table;
  double extrapolated = 0.0;
  double spread = 0.0;
  std::vector<LocatedZero> zeros;  // zeros found at the largest s
};

struct DensityOptions {
  double margin = 0.05;       // offset of the affinity probe around each strip edge
  double margin_tol = 1e-4;   // allowed second difference of M there
  double tile_width = 2.0;
  int torus_nodes = 4096;
  ZeroOptions zero;
};

/// Zeros in (-s, s) + i(g0, g1) per ladder entry, counted with multiplicity
/// over tiles. Throws DomainError when M_f is not affine near a strip edge.
DensityEstimate zero_density(const ExponentialSum& f, double g0, double g1, const LadderSpec& ladder,
                             const DensityOptions& opts = {});

struct SlopeJumpMeasure {
  GridSpec spec;
  std::vector<double> mean;  // M_f at the cell centers
  std::vector<double> mass;  // second difference / h^2 * h / (2 pi); zero on the two end cells
  double total = 0.0;
};

SlopeJumpMeasure slope_jump_measure(const ExponentialSum& f, const GridSpec& y_grid, const LadderSpec& ladder,
                                    int torus_nodes = 4096);

/// Cells of a one-dimensional grid within h of the imaginary part of a zero.
GridRegion zero_amoeba(std::span<const LocatedZero> zeros, const GridSpec& y_grid);

struct PullbackReport {
  std::vector<double> deviations;  // per point
  double max_deviation = 0.0;
};

/// |M_{E*P}(y) - N_P(y)| over the points; the mean uses 2 quad.N torus nodes.
PullbackReport pullback_consistency(const LaurentPolynomial& p, const std::vector<std::vector<double>>& y_list,
                                    const QuadratureSpec& quad, const LadderSpec& ladder);

}  // namespace amoebakit
