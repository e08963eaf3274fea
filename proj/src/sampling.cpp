#include "amoebakit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "amoebakit/error.hpp"
#include "amoebakit/newton.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/resultant.hpp"
#include "amoebakit/roots.hpp"

namespace amoebakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kChunk = 4096;

int modulus_count(const FiberGrid& g, int axis) {
  return static_cast<int>(std::floor((g.hi[axis] - g.lo[axis]) / g.step + 1e-9)) + 1;
}

double argument(const FiberGrid& g, int k) { return kTwoPi * (k + g.phase) / g.arg_nodes; }

void push_point(PointCloud& cloud, std::span<const double> y, const FiberGrid& g) {
  bool out = false;
  for (std::size_t j = 0; j < y.size(); ++j) {
    cloud.coords.push_back(y[j]);
    out = out || y[j] < g.lo[j] || y[j] > g.hi[j];
  }
  cloud.outside.push_back(out ? 1 : 0);
}

// Runs `body(sample, local_cloud)` over [0, total) in fixed chunks and
// concatenates the chunk clouds in order.
template <class Body>
PointCloud chunked(std::size_t total, int n, Body body, std::size_t& degenerate) {
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<PointCloud> parts(chunks);
  std::vector<std::size_t> degen(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    parts[c].n = n;
    const std::size_t end = std::min(total, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s)
      if (!body(s, parts[c])) ++degen[c];
  });
  PointCloud out;
  out.n = n;
  degenerate = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    out.append(parts[c]);
    degenerate += degen[c];
  }
  return out;
}

PointCloud sample_axis(const LaurentPolynomial& p, int axis, const FiberGrid& g) {
  const int n = p.dim();
  std::vector<int> others;
  for (int j = 0; j < n; ++j)
    if (j != axis) others.push_back(j);
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (int j : others) {
    radix.push_back(static_cast<std::size_t>(modulus_count(g, j)) * g.arg_nodes);
    total *= radix.back();
  }
  std::size_t degenerate = 0;
  auto body = [&](std::size_t s, PointCloud& local) {
    std::vector<cplx> values(n, cplx(1.0));
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < others.size(); ++t) {
      const std::size_t digit = s % radix[t];
      s /= radix[t];
      const int j = others[t];
      y[j] = g.lo[j] + static_cast<double>(digit / g.arg_nodes) * g.step;
      values[j] = std::polar(std::exp(y[j]), argument(g, static_cast<int>(digit % g.arg_nodes)));
    }
    const auto restricted = univariate_restrict(p, axis, values);
    if (!restricted) return false;
    for (const auto& r : roots_univariate(restricted->coeffs).roots) {
      if (r == cplx(0.0) || !std::isfinite(r.real()) || !std::isfinite(r.imag())) continue;
      y[axis] = std::log(std::abs(r));
      push_point(local, y, g);
    }
    return true;
  };
  PointCloud cloud = chunked(total, n, body, degenerate);
  cloud.source_hash = p.hash();
  cloud.axis = axis;
  cloud.fibers = total;
  cloud.degenerate_fibers = degenerate;
  cloud.grid = g;
  return cloud;
}

}  // namespace

void FiberGrid::validate(int n) const {
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
    throw UsageError("fiber grid window has wrong dimension");
  for (int j = 0; j < n; ++j)
    if (!(lo[j] <= hi[j])) throw UsageError("fiber grid window axis " + std::to_string(j) + " has lo > hi");
  if (!(step > 0.0)) throw UsageError("fiber grid step must be positive");
  if (arg_nodes < 1) throw UsageError("fiber grid needs at least one argument node");
  if (!(phase >= 0.0 && phase < 1.0)) throw UsageError("fiber grid phase must lie in [0, 1)");
}

FiberGrid FiberGrid::around(std::span<const double> lo, std::span<const double> hi, double margin, double step,
                            int arg_nodes, double phase) {
  FiberGrid g;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    g.lo.push_back(lo[j] - margin);
    g.hi.push_back(hi[j] + margin);
  }
  g.step = step;
  g.arg_nodes = arg_nodes;
  g.phase = phase;
  return g;
}

double phase_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void PointCloud::append(const PointCloud& other) {
  if (other.size() == 0) return;
  if (n == 0) n = other.n;
  if (n != other.n) throw UsageError("point cloud dimension mismatch");
  coords.insert(coords.end(), other.coords.begin(), other.coords.end());
  outside.insert(outside.end(), other.outside.begin(), other.outside.end());
}

PointCloud sample_hypersurface(const LaurentPolynomial& p, int axis, const FiberGrid& grid) {
  const int n = p.dim();
  if (axis < 0 || axis >= n) throw UsageError("sample axis out of range");
  if (!p.depends_on(axis)) throw UsageError("polynomial does not involve z" + std::to_string(axis + 1));
  grid.validate(n);
  PointCloud best = sample_axis(p, axis, grid);
  auto fraction = [](const PointCloud& c) {
    return c.fibers ? static_cast<double>(c.degenerate_fibers) / c.fibers : 0.0;
  };
  for (int step = 1; step < n && fraction(best) > 0.01; ++step) {
    const int next = (axis + step) % n;
    if (!p.varies_in(next)) continue;
    PointCloud alt = sample_axis(p, next, grid);
    if (fraction(alt) < fraction(best)) best = std::move(alt);
  }
  return best;
}

PointCloud amoeba_cloud(const LaurentPolynomial& p, const FiberGrid& grid) {
  const int n = p.dim();
  grid.validate(n);
  PointCloud out;
  out.n = n;
  out.source_hash = p.hash();
  out.grid = grid;
  for (int j = 0; j < n; ++j) {
    if (!p.varies_in(j)) continue;
    const PointCloud part = sample_axis(p, j, grid);
    out.append(part);
    out.fibers += part.fibers;
    out.degenerate_fibers += part.degenerate_fibers;
  }
  return out;
}

LaurentPolynomial permute_variables(const LaurentPolynomial& p, std::span<const int> order) {
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    std::vector<int> e(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) e[j] = t.exponent[order[j]];
    terms.push_back({std::move(e), t.coef});
  }
  return LaurentPolynomial(p.dim(), std::move(terms));
}

PointCloud sample_curve_3d(const LaurentPolynomial& p1, const LaurentPolynomial& p2, const FiberGrid& grid,
                           int fiber_axis, const CurveOptions& opts) {
  if (p1.dim() != 3 || p2.dim() != 3) throw UsageError("curve sampling needs polynomials in 3 variables");
  if (fiber_axis < 0 || fiber_axis > 2) throw UsageError("fiber axis out of range");
  grid.validate(3);
  // local coordinates (u, v, w) with w the fiber variable
  std::vector<int> order;
  for (int j = 0; j < 3; ++j)
    if (j != fiber_axis) order.push_back(j);
  order.push_back(fiber_axis);
  const LaurentPolynomial q1 = permute_variables(p1, order), q2 = permute_variables(p2, order);
  std::optional<LaurentPolynomial> d[2][2] = {{partial_derivative(q1, 0), partial_derivative(q1, 1)},
                                              {partial_derivative(q2, 0), partial_derivative(q2, 1)}};
  const int moduli = modulus_count(grid, fiber_axis);
  const std::size_t total = static_cast<std::size_t>(moduli) * grid.arg_nodes;

  auto body = [&](std::size_t s, PointCloud& local) {
    const double yw = grid.lo[fiber_axis] + static_cast<double>(s / grid.arg_nodes) * grid.step;
    const cplx w = std::polar(std::exp(yw), argument(grid, static_cast<int>(s % grid.arg_nodes)));
    const std::vector<cplx> fixed{1.0, 1.0, w};
    std::optional<Resultant> res;
    try {
      res = eliminate(q1, q2, 0, 1, fixed);
    } catch (const NumericError&) {
      return false;
    }
    if (!res) return false;
    if (res->coeffs.size() < 2) return true;  // nonzero constant: no common zeros
    const SystemFn system = [&](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& jac) {
      const std::vector<cplx> z{x[0], x[1], w};
      f[0] = q1(z);
      f[1] = q2(z);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) jac(a, b) = d[a][b] ? (*d[a][b])(z) : cplx(0.0);
    };
    std::vector<std::pair<cplx, cplx>> accepted;
    for (const auto& u : roots_univariate(res->coeffs).roots) {
      if (u == cplx(0.0) || !std::isfinite(std::abs(u))) continue;
      const std::vector<cplx> at{u, 1.0, w};
      auto restricted = univariate_restrict(q1, 1, at);
      if (!restricted || restricted->coeffs.size() < 2) restricted = univariate_restrict(q2, 1, at);
      if (!restricted || restricted->coeffs.size() < 2) continue;
      for (const auto& v : roots_univariate(restricted->coeffs).roots) {
        if (v == cplx(0.0) || !std::isfinite(std::abs(v))) continue;
        NewtonResult r;
        try {
          r = newton_polish(system, {u, v}, 50, 1e-13);
        } catch (const DomainError&) {
          continue;
        }
        if (!(r.residual <= opts.residual_tol) || !(r.condition <= opts.max_condition)) continue;
        if (r.x[0] == cplx(0.0) || r.x[1] == cplx(0.0)) continue;
        bool duplicate = false;
        for (const auto& [a, b] : accepted) {
          const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
          duplicate = duplicate || (std::abs(a - r.x[0]) + std::abs(b - r.x[1]) <= 1e-7 * scale);
        }
        if (duplicate) continue;
        accepted.emplace_back(r.x[0], r.x[1]);
        double y[3];
        y[order[0]] = std::log(std::abs(r.x[0]));
        y[order[1]] = std::log(std::abs(r.x[1]));
        y[fiber_axis] = yw;
        push_point(local, y, grid);
      }
    }
    return true;
  };
  std::size_t degenerate = 0;
  PointCloud cloud = chunked(total, 3, body, degenerate);
  if (degenerate == total) throw DegenerateError("curve is degenerate for every sample over z" +
                                                 std::to_string(fiber_axis + 1));
  cloud.source_hash = p1.hash() ^ (p2.hash() * 0x9e3779b97f4a7c15ULL);
  cloud.axis = fiber_axis;
  cloud.fibers = total;
  cloud.degenerate_fibers = degenerate;
  cloud.grid = grid;
  return cloud;
}

PointCloud curve_cloud(const LaurentPolynomial& p1, const LaurentPolynomial& p2, const FiberGrid& grid,
                       const CurveOptions& opts) {
  PointCloud out;
  out.n = 3;
  out.grid = grid;
  out.source_hash = p1.hash() ^ (p2.hash() * 0x9e3779b97f4a7c15ULL);
  bool any = false;
  for (int axis = 0; axis < 3; ++axis) {
    try {
      const PointCloud part = sample_curve_3d(p1, p2, grid, axis, opts);
      out.append(part);
      out.fibers += part.fibers;
      out.degenerate_fibers += part.degenerate_fibers;
      any = true;
    } catch (const DegenerateError&) {
    }
  }
  if (!any) throw DegenerateError("curve is degenerate over every fiber axis");
  return out;
}

}  // namespace amoebakit
