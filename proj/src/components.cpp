#include "amoebakit/components.hpp"

#include <algorithm>
#include <numeric>

#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"

namespace amoebakit {

std::vector<Component> complement_components(const GridRegion& region) {
  const auto& spec = region.spec;
  const int n = spec.dim();
  std::vector<int> label(spec.cell_count(), -1);
  std::vector<Component> out;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < spec.cell_count(); ++seed) {
    if (region.occupied[seed] || label[seed] >= 0) continue;
    Component comp;
    const int id = static_cast<int>(out.size());
    label[seed] = id;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      comp.cells.push_back(c);
      std::size_t rest = c;
      for (int j = 0; j < n; ++j) {
        const int i = static_cast<int>(rest % spec.counts()[j]);
        rest /= spec.counts()[j];
        if (i == 0 || i == spec.counts()[j] - 1) comp.window_truncated = true;
        for (int s : {-1, 1}) {
          if (i + s < 0 || i + s >= spec.counts()[j]) continue;
          const std::size_t nb = s < 0 ? c - spec.stride(j) : c + spec.stride(j);
          if (region.occupied[nb] || label[nb] >= 0) continue;
          label[nb] = id;
          stack.push_back(nb);
        }
      }
    }
    std::sort(comp.cells.begin(), comp.cells.end());
    out.push_back(std::move(comp));
  }
  return out;
}

ConvexityReport convexity_check_region(const GridSpec& spec, const Component& component, std::size_t max_report,
                                       std::size_t max_pairs) {
  if (component.cells.empty()) throw UsageError("convexity check needs a nonempty component");
  const int n = spec.dim();
  std::vector<std::uint8_t> member(spec.cell_count(), 0);
  for (auto c : component.cells) member[c] = 1;

  std::vector<std::size_t> cells = component.cells;
  ConvexityReport report;
  const std::size_t m = cells.size();
  if (m * (m - 1) / 2 > max_pairs) {
    report.boundary_pairs_only = true;
    std::vector<std::size_t> boundary;
    for (auto c : cells) {
      const auto idx = spec.unravel(c);
      bool edge = false;
      for (int j = 0; j < n && !edge; ++j) {
        if (idx[j] == 0 || idx[j] == spec.counts()[j] - 1) {
          edge = true;
          break;
        }
        edge = !member[c - spec.stride(j)] || !member[c + spec.stride(j)];
      }
      if (edge) boundary.push_back(c);
    }
    cells = std::move(boundary);
  }

  std::vector<std::vector<int>> coords(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) coords[i] = spec.unravel(cells[i]);

  struct Partial {
    std::size_t pairs = 0, count = 0;
    std::vector<ConvexityViolation> found;
  };
  std::vector<Partial> parts(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    Partial& part = parts[i];
    std::vector<int> step(n);
    for (std::size_t k = i + 1; k < cells.size(); ++k) {
      ++part.pairs;
      int g = 0;
      for (int j = 0; j < n; ++j) g = std::gcd(g, coords[k][j] - coords[i][j]);
      if (g <= 1) continue;
      std::ptrdiff_t offset = 0;
      for (int j = 0; j < n; ++j) offset += static_cast<std::ptrdiff_t>(spec.stride(j)) * ((coords[k][j] - coords[i][j]) / g);
      for (int t = 1; t < g; ++t) {
        const auto c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(cells[i]) + offset * t);
        if (member[c]) continue;
        ++part.count;
        if (part.found.size() < max_report) part.found.push_back({cells[i], cells[k], c});
        break;
      }
    }
  });
  for (const auto& part : parts) {
    report.pairs_checked += part.pairs;
    report.violation_count += part.count;
    for (const auto& v : part.found) {
      if (report.violations.size() >= max_report) break;
      report.violations.push_back(v);
    }
  }
  return report;
}

}  // namespace amoebakit
