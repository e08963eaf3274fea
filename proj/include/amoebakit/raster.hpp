#pragma once

#include <vector>

#include "amoebakit/fiber_min.hpp"
#include "amoebakit/grid.hpp"
#include "amoebakit/sampling.hpp"

namespace amoebakit {

struct RasterStats {
  std::size_t ignored_points = 0;  // outside the grid window
};

/// A cell is occupied iff some in-window cloud point lies within
/// dilation_r of its center. Throws UsageError when dilation_r < h sqrt(n).
GridRegion rasterize(const PointCloud& cloud, const GridSpec& spec, double dilation_r, RasterStats* stats = nullptr);

/// Fiber minimum of |P| at every cell center, with the membership
/// threshold tau = 2 h L. L is the largest face-neighbour slope across the
/// edge of the numerical zero set, or the slope around the smallest value
/// when the field has no zeros.
struct MembershipField {
  GridSpec spec;
  std::vector<double> values;
  double tau = 0.0;
  double lipschitz = 0.0;
};

MembershipField membership_field(const LaurentPolynomial& p, const GridSpec& spec, const FiberMinOptions& opts = {});

/// Cells whose field value is at most tau.
GridRegion threshold_region(const MembershipField& field);

}  // namespace amoebakit
