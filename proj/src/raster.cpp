#include "amoebakit/raster.hpp"

#include <algorithm>
#include <cmath>

#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"

namespace amoebakit {

GridRegion rasterize(const PointCloud& cloud, const GridSpec& spec, double dilation_r, RasterStats* stats) {
  const int n = spec.dim();
  if (cloud.size() > 0 && cloud.n != n) throw UsageError("cloud and grid dimensions differ");
  if (dilation_r < spec.h() * std::sqrt(static_cast<double>(n)) * (1 - 1e-12))
    throw UsageError("dilation radius must be at least h * sqrt(n)");
  GridRegion region(spec, dilation_r);
  const double h = spec.h();
  const double r2 = dilation_r * dilation_r;
  std::size_t ignored = 0;
  std::vector<int> lo(n), hi(n), idx(n);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto y = cloud.point(i);
    if (!spec.contains(y)) {
      ++ignored;
      continue;
    }
    for (int j = 0; j < n; ++j) {
      lo[j] = std::max(0, static_cast<int>(std::floor((y[j] - dilation_r - spec.lo()[j]) / h - 0.5)));
      hi[j] = std::min(spec.counts()[j] - 1, static_cast<int>(std::ceil((y[j] + dilation_r - spec.lo()[j]) / h - 0.5)));
      if (lo[j] > hi[j]) goto next_point;
      idx[j] = lo[j];
    }
    while (true) {
      double d2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = spec.center(j, idx[j]) - y[j];
        d2 += d * d;
      }
      if (d2 <= r2) region.occupied[spec.ravel(idx)] = 1;
      int j = 0;
      while (j < n && idx[j] == hi[j]) {
        idx[j] = lo[j];
        ++j;
      }
      if (j == n) break;
      ++idx[j];
    }
  next_point:;
  }
  if (stats) stats->ignored_points = ignored;
  return region;
}

MembershipField membership_field(const LaurentPolynomial& p, const GridSpec& spec, const FiberMinOptions& opts) {
  if (p.dim() != spec.dim()) throw UsageError("polynomial and grid dimensions differ");
  MembershipField field;
  field.spec = spec;
  field.values.assign(spec.cell_count(), 0.0);
  parallel_for(spec.cell_count(), [&](std::size_t c) {
    const auto y = spec.center(c);
    field.values[c] = fiber_minimize(p, y, opts).min_modulus;
  });
  // slope across the edge of the numerical zero set; without one, the
  // slope around the smallest value
  double scale = 0.0;
  for (const auto& t : p.terms()) scale = std::max(scale, std::abs(t.coef));
  const double zero_tol = 1e-8 * scale;
  double lip = 0.0;
  std::size_t argmin = 0;
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    if (field.values[c] < field.values[argmin]) argmin = c;
    const auto idx = spec.unravel(c);
    for (int j = 0; j < spec.dim(); ++j) {
      if (idx[j] + 1 >= spec.counts()[j]) continue;
      const double a = field.values[c], b = field.values[c + spec.stride(j)];
      if (std::min(a, b) <= zero_tol) lip = std::max(lip, std::abs(a - b) / spec.h());
    }
  }
  if (lip == 0.0) {
    const auto idx = spec.unravel(argmin);
    for (int j = 0; j < spec.dim(); ++j) {
      if (idx[j] + 1 < spec.counts()[j])
        lip = std::max(lip, std::abs(field.values[argmin + spec.stride(j)] - field.values[argmin]) / spec.h());
      if (idx[j] > 0)
        lip = std::max(lip, std::abs(field.values[argmin - spec.stride(j)] - field.values[argmin]) / spec.h());
    }
  }
  field.lipschitz = lip;
  field.tau = 2.0 * spec.h() * lip;
  // a constant field (no slope information) still needs a positive threshold
  if (!(field.tau > 0.0)) field.tau = 1e-12;
  return field;
}

GridRegion threshold_region(const MembershipField& field) {
  GridRegion region(field.spec, 0.0);
  for (std::size_t c = 0; c < field.values.size(); ++c) region.occupied[c] = field.values[c] <= field.tau;
  return region;
}

}  // namespace amoebakit
