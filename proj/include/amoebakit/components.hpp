#pragma once

#include <cstddef>
#include <vector>

#include "amoebakit/grid.hpp"

namespace amoebakit {

/// Face-connected set of unoccupied cells.
struct Component {
  std::vector<std::size_t> cells;  // ascending
  bool window_truncated = false;   // touches the window boundary
};

/// Components ordered by their smallest cell index.
std::vector<Component> complement_components(const GridRegion& region);

struct ConvexityViolation {
  std::size_t a = 0, b = 0;    // component cells whose segment is blocked
  std::size_t blocking = 0;    // cell on the segment outside the component
};

struct ConvexityReport {
  std::size_t pairs_checked = 0;
  std::size_t violation_count = 0;
  std::vector<ConvexityViolation> violations;  // first `max_report`, in pair order
  bool boundary_pairs_only = false;
};

/// Checks that every grid cell whose center lies on the segment between two
/// component cell centers belongs to the component. Components with more
/// than `max_pairs` pairs are checked on pairs of their boundary cells.
ConvexityReport convexity_check_region(const GridSpec& spec, const Component& component,
                                       std::size_t max_report = 100, std::size_t max_pairs = 200'000'000);

}  // namespace amoebakit
