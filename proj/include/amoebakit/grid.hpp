#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace amoebakit {

/// Uniform grid on an axis-aligned window. Cell i on axis j spans
/// [lo_j + i h, lo_j + (i+1) h); cells are numbered with axis 0 fastest.
class GridSpec {
 public:
  GridSpec() = default;
  /// Throws UsageError unless lo < hi per axis, h > 0 and every axis has at
  /// least 2 cells.
  GridSpec(std::vector<double> lo, std::vector<double> hi, double h);

  int dim() const { return static_cast<int>(lo_.size()); }
  double h() const { return h_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& counts() const { return counts_; }
  std::size_t cell_count() const { return total_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::vector<int> unravel(std::size_t index) const;
  std::size_t ravel(std::span<const int> idx) const;
  double center(int axis, int i) const { return lo_[axis] + (i + 0.5) * h_; }
  std::vector<double> center(std::size_t index) const;
  /// Cell containing y, or nullopt outside the window.
  std::optional<std::size_t> locate(std::span<const double> y) const;
  bool contains(std::span<const double> y) const;
  bool on_boundary(std::size_t index) const;

  bool operator==(const GridSpec& o) const;

 private:
  std::vector<double> lo_, hi_;
  double h_ = 0.0;
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

/// Square window [-a, a]^n.
GridSpec symmetric_grid(int n, double a, double h);

/// Occupancy raster of a closed set.
struct GridRegion {
  GridSpec spec;
  std::vector<std::uint8_t> occupied;  // one byte per cell, 0 or 1
  double dilation_r = 0.0;

  GridRegion() = default;
  GridRegion(GridSpec s, double r) : spec(std::move(s)), occupied(spec.cell_count(), 0), dilation_r(r) {}

  std::size_t occupied_count() const;
  bool empty() const { return occupied_count() == 0; }
};

/// Cell-wise union; specs must match (UsageError otherwise). The dilation
/// radius of the result is the larger of the two.
GridRegion region_union(const GridRegion& a, const GridRegion& b);

/// Chebyshev distance in cells from every cell to the nearest cell with
/// `sources[c] != 0`; -1 when there is no source.
std::vector<int> cell_distance(const GridSpec& spec, const std::vector<std::uint8_t>& sources);

}  // namespace amoebakit
