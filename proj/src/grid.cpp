#include "amoebakit/grid.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "amoebakit/error.hpp"

namespace amoebakit {

GridSpec::GridSpec(std::vector<double> lo, std::vector<double> hi, double h)
    : lo_(std::move(lo)), hi_(std::move(hi)), h_(h) {
  if (lo_.empty() || lo_.size() != hi_.size()) throw UsageError("grid window needs matching lo/hi per axis");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw UsageError("grid spacing must be positive");
  total_ = 1;
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    if (!(lo_[j] < hi_[j])) throw UsageError("grid window axis " + std::to_string(j) + " has lo >= hi");
    const double cells = std::round((hi_[j] - lo_[j]) / h_);
    if (cells < 2) throw UsageError("grid axis " + std::to_string(j) + " has fewer than 2 cells");
    if (cells > 1e7) throw UsageError("grid axis " + std::to_string(j) + " is too fine");
    counts_.push_back(static_cast<int>(cells));
    strides_.push_back(total_);
    total_ *= static_cast<std::size_t>(cells);
  }
  if (total_ > (std::size_t(1) << 31)) throw UsageError("grid has too many cells");
}

std::vector<int> GridSpec::unravel(std::size_t index) const {
  std::vector<int> idx(counts_.size());
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    idx[j] = static_cast<int>(index % counts_[j]);
    index /= counts_[j];
  }
  return idx;
}

std::size_t GridSpec::ravel(std::span<const int> idx) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < counts_.size(); ++j) index += strides_[j] * idx[j];
  return index;
}

std::vector<double> GridSpec::center(std::size_t index) const {
  std::vector<double> y(counts_.size());
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    y[j] = center(static_cast<int>(j), static_cast<int>(index % counts_[j]));
    index /= counts_[j];
  }
  return y;
}

std::optional<std::size_t> GridSpec::locate(std::span<const double> y) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    const double t = std::floor((y[j] - lo_[j]) / h_);
    if (!(t >= 0) || t >= counts_[j]) return std::nullopt;
    index += strides_[j] * static_cast<std::size_t>(t);
  }
  return index;
}

bool GridSpec::contains(std::span<const double> y) const {
  for (std::size_t j = 0; j < lo_.size(); ++j)
    if (!(y[j] >= lo_[j] && y[j] <= hi_[j])) return false;
  return true;
}

bool GridSpec::on_boundary(std::size_t index) const {
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    const int i = static_cast<int>(index % counts_[j]);
    if (i == 0 || i == counts_[j] - 1) return true;
    index /= counts_[j];
  }
  return false;
}

bool GridSpec::operator==(const GridSpec& o) const { return lo_ == o.lo_ && hi_ == o.hi_ && h_ == o.h_; }

GridSpec symmetric_grid(int n, double a, double h) {
  return GridSpec(std::vector<double>(n, -a), std::vector<double>(n, a), h);
}

std::size_t GridRegion::occupied_count() const {
  std::size_t c = 0;
  for (auto b : occupied) c += b != 0;
  return c;
}

GridRegion region_union(const GridRegion& a, const GridRegion& b) {
  if (!(a.spec == b.spec)) throw UsageError("region union needs matching grids");
  GridRegion out(a.spec, std::max(a.dilation_r, b.dilation_r));
  for (std::size_t c = 0; c < out.occupied.size(); ++c) out.occupied[c] = a.occupied[c] | b.occupied[c];
  return out;
}

std::vector<int> cell_distance(const GridSpec& spec, const std::vector<std::uint8_t>& sources) {
  const int n = spec.dim();
  std::vector<int> dist(spec.cell_count(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    if (sources[c]) {
      dist[c] = 0;
      queue.push_back(c);
    }
  }
  // 3^n - 1 neighbour offsets
  std::vector<std::vector<int>> offsets;
  std::vector<int> off(n, -1);
  while (true) {
    bool zero = true;
    for (int v : off) zero = zero && v == 0;
    if (!zero) offsets.push_back(off);
    int j = 0;
    while (j < n && off[j] == 1) off[j++] = -1;
    if (j == n) break;
    ++off[j];
  }
  const auto& counts = spec.counts();
  std::vector<int> idx(n);
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    std::size_t rest = c;
    for (int j = 0; j < n; ++j) {
      idx[j] = static_cast<int>(rest % counts[j]);
      rest /= counts[j];
    }
    for (const auto& o : offsets) {
      std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(c);
      bool inside = true;
      for (int j = 0; j < n && inside; ++j) {
        const int k = idx[j] + o[j];
        inside = k >= 0 && k < counts[j];
        nb += static_cast<std::ptrdiff_t>(spec.stride(j)) * o[j];
      }
      if (!inside || dist[nb] >= 0) continue;
      dist[nb] = dist[c] + 1;
      queue.push_back(static_cast<std::size_t>(nb));
    }
  }
  return dist;
}

}  // namespace amoebakit
