#include "amoebakit/newton_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace amoebakit {

namespace {

using Point = std::vector<int>;

long long cross(const Point& o, const Point& a, const Point& b) {
  return static_cast<long long>(a[0] - o[0]) * (b[1] - o[1]) -
         static_cast<long long>(a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; collinear boundary points are not extreme.
std::vector<Point> hull_2d(std::vector<Point> pts) {
  if (pts.size() <= 1) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  std::sort(h.begin(), h.end());
  return h;
}

// Solves the (m+1) x m least-squares system for barycentric weights of p
// with respect to `subset`; true if p is a convex combination of them.
bool in_simplex(const std::vector<const Point*>& subset, const Point& p) {
  const std::size_t m = subset.size();
  const std::size_t d = p.size();
  // rows: coordinates then the affine constraint
  std::vector<std::vector<long double>> a(d + 1, std::vector<long double>(m + 1, 0.0L));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < m; ++c) a[r][c] = (*subset[c])[r];
    a[r][m] = p[r];
  }
  for (std::size_t c = 0; c < m; ++c) a[d][c] = 1.0L;
  a[d][m] = 1.0L;
  // Gaussian elimination on the augmented system with full row pivoting
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < m && row <= d; ++c) {
    std::size_t best = row;
    for (std::size_t r = row; r <= d; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[best][c])) best = r;
    }
    if (std::fabs(a[best][c]) < 1e-12L) return false;  // affinely dependent subset
    std::swap(a[row], a[best]);
    for (std::size_t r = 0; r <= d; ++r) {
      if (r == row) continue;
      const long double f = a[r][c] / a[row][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r <= d; ++r) {
    if (std::fabs(a[r][m]) > 1e-9L) return false;  // inconsistent
  }
  for (std::size_t r = 0; r < row; ++r) {
    const long double w = a[r][m] / a[r][pivot_col[r]];
    if (w < -1e-12L) return false;
  }
  return true;
}

bool in_hull_of_others(const std::vector<Point>& pts, std::size_t skip) {
  const std::size_t d = pts[skip].size();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i != skip) others.push_back(i);
  }
  // Caratheodory: enough to test subsets of size <= d + 1
  for (std::size_t m = 1; m <= std::min(d + 1, others.size()); ++m) {
    std::vector<bool> mask(others.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(m), true);
    do {
      std::vector<const Point*> subset;
      for (std::size_t i = 0; i < others.size(); ++i) {
        if (mask[i]) subset.push_back(&pts[others[i]]);
      }
      if (in_simplex(subset, pts[skip])) return true;
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> extreme_points(std::vector<std::vector<int>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 1) return points;
  const std::size_t d = points.front().size();
  if (d == 1) return {points.front(), points.back()};
  if (d == 2) return hull_2d(std::move(points));
  std::vector<Point> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!in_hull_of_others(points, i)) out.push_back(points[i]);
  }
  return out;
}

NewtonPolytope newton_polytope(const LaurentPolynomial& p) {
  std::vector<std::vector<int>> pts;
  for (const auto& t : p.terms()) pts.push_back(t.exponent);
  return NewtonPolytope{extreme_points(std::move(pts))};
}

double NewtonPolytope::support(std::span<const double> direction) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * direction[j];
    best = std::max(best, s);
  }
  return best;
}

double polytope_excess(const NewtonPolytope& poly, std::span<const double> x) {
  const std::size_t n = x.size();
  double excess = 0.0;
  auto probe = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += u[j] * x[j];
    excess = std::max(excess, s - poly.support(u));
  };
  if (n == 1) {
    probe({1.0});
    probe({-1.0});
    return excess;
  }
  if (n == 2) {
    constexpr int kDirections = 720;
    for (int k = 0; k < kDirections; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kDirections;
      probe({std::cos(a), std::sin(a)});
    }
    return excess;
  }
  // n >= 3: axes, pairwise diagonals and a Fibonacci sphere in the first
  // three coordinates
  for (std::size_t j = 0; j < n; ++j) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> u(n, 0.0);
      u[j] = s;
      probe(u);
    }
  }
  constexpr int kSphere = 2000;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < kSphere; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / kSphere;
    const double r = std::sqrt(1.0 - z * z);
    std::vector<double> u(n, 0.0);
    u[0] = r * std::cos(golden * k);
    u[1] = r * std::sin(golden * k);
    u[2] = z;
    probe(u);
  }
  return excess;
}

}  // namespace amoebakit
