#include "amoebakit/ronkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "amoebakit/components.hpp"
#include "amoebakit/error.hpp"
#include "amoebakit/linalg.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/roots.hpp"

namespace amoebakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// One monomial restricted to the torus axes: coefficient group, exponents on
// the torus axes and the modulus weight c * exp(<e, y>).
struct TorusTerm {
  int group = 0;
  std::vector<int> exponent;
  cplx weight;
};

const std::vector<cplx>& roots_of_unity(int N) {
  thread_local std::vector<cplx> table;
  if (table.size() != static_cast<std::size_t>(N)) {
    table.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) table[k] = std::polar(1.0, kTwoPi * k / N);
  }
  return table;
}

struct Slice {
  Neumaier fine, coarse;
  int perturbed = 0;
};

// Uniform-rule mean over [0, 2 pi)^m of finish(b), where
// b_g = sum over terms of group g of weight * exp(i <exponent, theta>).
template <class Finish>
PeriodicMean torus_mean(const std::vector<TorusTerm>& terms, int groups, int m, int N, const Finish& finish) {
  PeriodicMean out;
  std::vector<cplx> b(static_cast<std::size_t>(groups));
  if (m == 0) {
    for (const auto& t : terms) b[t.group] += t.weight;
    out.value = out.coarse = finish(b);
    if (!std::isfinite(out.value)) throw NumericError("log modulus is not finite at this point");
    return out;
  }
  const std::vector<cplx>& omega = roots_of_unity(N);
  const std::size_t T = terms.size();
  // exponent steps normalized to [0, N)
  std::vector<int> delta(T * m);
  for (std::size_t t = 0; t < T; ++t)
    for (int j = 0; j < m; ++j) delta[t * m + j] = ((terms[t].exponent[j] % N) + N) % N;

  auto direct = [&](const std::vector<int>& k) {
    std::vector<cplx> bb(static_cast<std::size_t>(groups));
    for (const auto& t : terms) {
      double phase = 0.0;
      for (int j = 0; j < m; ++j) phase += t.exponent[j] * (k[j] + 0.5) * kTwoPi / N;
      bb[t.group] += t.weight * std::polar(1.0, phase);
    }
    return finish(bb);
  };

  const bool even = N % 2 == 0;
  // fixed blocks of first-axis slices; sums are combined in block order
  const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(N), 64);
  std::vector<Slice> slices(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    Slice& s = slices[blk];
    std::vector<int> k(m, 0), cur(T);
    std::vector<cplx> bb(static_cast<std::size_t>(groups));
    const std::size_t k0_begin = N * blk / blocks, k0_end = N * (blk + 1) / blocks;
    for (std::size_t k0 = k0_begin; k0 < k0_end; ++k0) {
      std::fill(k.begin(), k.end(), 0);
      k[0] = static_cast<int>(k0);
      for (std::size_t t = 0; t < T; ++t)
        cur[t] = static_cast<int>((static_cast<long long>(delta[t * m]) * static_cast<long long>(k0)) % N);
      while (true) {
        std::fill(bb.begin(), bb.end(), cplx(0.0));
        for (std::size_t t = 0; t < T; ++t) {
          // plain real arithmetic avoids the library call for complex products
          const cplx w = terms[t].weight, o = omega[cur[t]];
          bb[terms[t].group] += cplx(w.real() * o.real() - w.imag() * o.imag(), w.real() * o.imag() + w.imag() * o.real());
        }
        double v = finish(bb);
        if (!std::isfinite(v)) {
          v = direct(k);
          ++s.perturbed;
          if (!std::isfinite(v)) {
            std::string where;
            for (int j = 0; j < m; ++j) where += (j ? "," : "") + std::to_string(k[j]);
            throw NumericError("log modulus is not finite at node (" + where + ") even after perturbation");
          }
        }
        s.fine.add(v);
        if (even) {
          bool all_even = true;
          for (int j = 0; j < m; ++j) all_even = all_even && k[j] % 2 == 0;
          if (all_even) s.coarse.add(v);
        }
        int j = 1;
        while (j < m && k[j] == N - 1) {
          k[j] = 0;
          for (std::size_t t = 0; t < T; ++t) {
            cur[t] -= static_cast<int>((static_cast<long long>(delta[t * m + j]) * (N - 1)) % N);
            if (cur[t] < 0) cur[t] += N;
          }
          ++j;
        }
        if (j >= m) break;
        ++k[j];
        for (std::size_t t = 0; t < T; ++t) {
          cur[t] += delta[t * m + j];
          if (cur[t] >= N) cur[t] -= N;
        }
      }
    }
  });
  Neumaier fine, coarse;
  for (const auto& s : slices) {
    fine.add(s.fine.value());
    coarse.add(s.coarse.value());
    out.perturbed_nodes += s.perturbed;
  }
  const double nodes = std::pow(static_cast<double>(N), m);
  out.value = fine.value() / nodes;
  out.coarse = even ? coarse.value() / std::pow(static_cast<double>(N / 2), m) : out.value;
  out.error_estimate = std::abs(out.value - out.coarse);
  return out;
}

double log_modulus(cplx z) {
  const double n2 = std::norm(z);
  if (n2 > 1e-290 && n2 < 1e290) return 0.5 * std::log(n2);
  return std::log(std::abs(z));
}

double log_abs(const std::vector<cplx>& b) { return log_modulus(b[0]); }

// Mean over |t| = exp(y) of log|t^shift sum_g b_g t^g|, from the roots.
double jensen(const std::vector<cplx>& b, double y, double ey, int shift) {
  int lo = -1, hi = -1;
  for (int g = 0; g < static_cast<int>(b.size()); ++g) {
    if (b[g] != cplx(0.0)) {
      if (lo < 0) lo = g;
      hi = g;
    }
  }
  if (lo < 0) return -std::numeric_limits<double>::infinity();
  const double base = (shift + lo) * y;
  if (hi == lo) return base + log_modulus(b[lo]);
  if (hi == lo + 1) {
    const double top = std::norm(b[hi]) * (ey * ey), low = std::norm(b[lo]);
    const double m = std::max(top, low);
    if (m > 1e-290 && m < 1e290) return base + 0.5 * std::log(m);
    return base + std::max(std::log(std::abs(b[hi])) + y, std::log(std::abs(b[lo])));
  }
  double v = base + log_modulus(b[hi]);
  if (hi == lo + 2) {
    // stable quadratic formula
    const cplx a = b[hi], bb = b[lo + 1], c = b[lo];
    const cplx disc = std::sqrt(bb * bb - 4.0 * a * c);
    const cplx q = -0.5 * (std::real(std::conj(bb) * disc) >= 0 ? bb + disc : bb - disc);
    if (q == cplx(0.0)) return v + 2 * y;  // double root at 0 cannot happen with b[lo] != 0
    const cplx r1 = q / a, r2 = c / q;
    return v + std::max(y, log_modulus(r1)) + std::max(y, log_modulus(r2));
  }
  const std::span<const cplx> coeffs(b.data() + lo, static_cast<std::size_t>(hi - lo + 1));
  for (const auto& r : roots_univariate(coeffs).roots) v += std::max(y, log_modulus(r));
  return v;
}

double monomial_value(const LaurentPolynomial& p, std::span<const double> y) {
  const auto& t = p.terms()[0];
  double v = std::log(std::abs(t.coef));
  for (std::size_t j = 0; j < y.size(); ++j) v += t.exponent[j] * y[j];
  return v;
}

void check_nodes(int N) {
  if (N < 1) throw UsageError("quadrature needs at least one node per axis");
}

PeriodicMean jensen_cell(const LaurentPolynomial& p, int axis, std::span<const double> y, int N) {
  const int n = p.dim();
  const int shift = p.min_exponent(axis);
  const int groups = p.max_exponent(axis) - shift + 1;
  std::vector<TorusTerm> terms;
  for (const auto& t : p.terms()) {
    TorusTerm tt;
    tt.group = t.exponent[axis] - shift;
    double re = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == axis) continue;
      tt.exponent.push_back(t.exponent[j]);
      re += t.exponent[j] * y[j];
    }
    tt.weight = t.coef * std::exp(re);
    terms.push_back(std::move(tt));
  }
  const double ya = y[axis], ea = std::exp(ya);
  return torus_mean(terms, groups, n - 1, N,
                    [&](const std::vector<cplx>& b) { return jensen(b, ya, ea, shift); });
}

// One variable: the torus rule. Otherwise the Jensen rule averaged over
// all axes: symmetric polynomials give symmetric fields, and the field of a
// product is the sum of the fields node by node.
PeriodicMean field_cell(const LaurentPolynomial& p, const std::vector<int>& axes, std::span<const double> y, int N) {
  if (p.dim() == 1) {
    std::vector<TorusTerm> terms;
    for (const auto& t : p.terms()) terms.push_back({0, t.exponent, t.coef * std::exp(t.exponent[0] * y[0])});
    return torus_mean(terms, 1, 1, N, log_abs);
  }
  PeriodicMean out;
  for (int a : axes) {
    const PeriodicMean r = jensen_cell(p, a, y, N);
    out.value += r.value;
    out.coarse += r.coarse;
    out.perturbed_nodes += r.perturbed_nodes;
  }
  out.value /= static_cast<double>(axes.size());
  out.coarse /= static_cast<double>(axes.size());
  out.error_estimate = std::abs(out.value - out.coarse);
  return out;
}

}  // namespace

PeriodicMean ronkin_value_estimate(const LaurentPolynomial& p, std::span<const double> y, const QuadratureSpec& quad) {
  if (static_cast<int>(y.size()) != p.dim()) throw UsageError("ronkin_value: dimension mismatch");
  check_nodes(quad.nodes_per_axis);
  if (p.size() == 1) {
    PeriodicMean out;
    out.value = out.coarse = monomial_value(p, y);
    return out;
  }
  std::vector<TorusTerm> terms;
  for (const auto& t : p.terms()) {
    double re = 0.0;
    for (int j = 0; j < p.dim(); ++j) re += t.exponent[j] * y[j];
    terms.push_back({0, t.exponent, t.coef * std::exp(re)});
  }
  return torus_mean(terms, 1, p.dim(), quad.nodes_per_axis, log_abs);
}

double ronkin_value(const LaurentPolynomial& p, std::span<const double> y, const QuadratureSpec& quad) {
  return ronkin_value_estimate(p, y, quad).value;
}

RonkinField ronkin_field(const LaurentPolynomial& p, const GridSpec& spec, const QuadratureSpec& quad,
                         const RonkinOptions& opts) {
  if (p.dim() != spec.dim()) throw UsageError("polynomial and grid dimensions differ");
  check_nodes(quad.nodes_per_axis);
  RonkinField field;
  field.spec = spec;
  field.quad_N = quad.nodes_per_axis;
  const std::size_t cells = spec.cell_count();
  field.values.assign(cells, 0.0);
  field.err_est.assign(cells, 0.0);
  field.capped.assign(cells, 0);
  if (p.size() == 1) {
    for (std::size_t c = 0; c < cells; ++c) field.values[c] = monomial_value(p, spec.center(c));
    return field;
  }
  std::vector<int> axes;
  if (p.dim() > 1)
    for (int j = 0; j < p.dim(); ++j) axes.push_back(j);
  field.jensen_axes = axes;
  parallel_for(cells, [&](std::size_t c) {
    const auto y = spec.center(c);
    int N = quad.nodes_per_axis;
    PeriodicMean r = field_cell(p, axes, y, N);
    while (opts.refine && r.error_estimate > opts.target && N < opts.cap) {
      N = std::min(2 * N, opts.cap);
      r = field_cell(p, axes, y, N);
    }
    field.values[c] = r.value;
    field.err_est[c] = r.error_estimate;
    field.capped[c] = opts.refine && r.error_estimate > opts.target;
  });
  return field;
}

std::vector<double> gradient_field(const RonkinField& field) {
  const auto& spec = field.spec;
  const int n = spec.dim();
  for (int j = 0; j < n; ++j)
    if (spec.counts()[j] < 3) throw UsageError("gradient needs at least 3 cells per axis");
  std::vector<double> grad(spec.cell_count() * n);
  const double h = spec.h();
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    const auto idx = spec.unravel(c);
    for (int j = 0; j < n; ++j) {
      const std::size_t s = spec.stride(j);
      double g;
      if (idx[j] == 0)
        g = (field.values[c + s] - field.values[c]) / h;
      else if (idx[j] == spec.counts()[j] - 1)
        g = (field.values[c] - field.values[c - s]) / h;
      else
        g = (field.values[c + s] - field.values[c - s]) / (2 * h);
      grad[c * n + j] = g;
    }
  }
  return grad;
}

MassGrid laplacian_mass(const RonkinField& field) {
  const auto& spec = field.spec;
  const int n = spec.dim();
  for (int j = 0; j < n; ++j)
    if (spec.counts()[j] < 3) throw UsageError("laplacian needs at least 3 cells per axis");
  MassGrid out;
  out.spec = spec;
  out.mass.assign(spec.cell_count(), 0.0);
  const double h = spec.h();
  const double volume_over_h2 = std::pow(h, n) / (h * h);
  Neumaier total;
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    if (spec.on_boundary(c)) continue;
    double lap = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::size_t s = spec.stride(j);
      lap += field.values[c + s] - 2 * field.values[c] + field.values[c - s];
    }
    out.mass[c] = lap * volume_over_h2;
    total.add(out.mass[c]);
    out.min_mass = std::min(out.min_mass, out.mass[c]);
  }
  out.total = total.value();
  return out;
}

SupportReport support_compare(const MassGrid& mass, const GridRegion& amoeba, double tau_mass) {
  if (!(mass.spec == amoeba.spec)) throw UsageError("support_compare: mass grid and amoeba raster differ");
  const auto& spec = mass.spec;
  std::vector<std::uint8_t> carries(spec.cell_count(), 0);
  SupportReport rep;
  Neumaier positive, outside;
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    carries[c] = mass.mass[c] > tau_mass;
    rep.mass_cells += carries[c];
    rep.amoeba_cells += amoeba.occupied[c] != 0;
  }
  const auto to_amoeba = cell_distance(spec, amoeba.occupied);
  const auto to_mass = cell_distance(spec, carries);
  int far_mass = 0, far_amoeba = 0;
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    if (carries[c]) {
      positive.add(mass.mass[c]);
      if (to_amoeba[c] < 0 || to_amoeba[c] > 2) outside.add(mass.mass[c]);
      far_mass = std::max(far_mass, to_amoeba[c]);
    }
    if (amoeba.occupied[c]) {
      if (to_mass[c] < 0 || to_mass[c] > 2) ++rep.uncovered_amoeba_cells;
      far_amoeba = std::max(far_amoeba, to_mass[c]);
    }
  }
  rep.outside_mass_fraction = positive.value() > 0.0 ? outside.value() / positive.value() : 0.0;
  if ((rep.mass_cells == 0) != (rep.amoeba_cells == 0))
    rep.hausdorff_cells = -1;
  else
    rep.hausdorff_cells = std::max(far_mass, far_amoeba);
  return rep;
}

ConvexitySweep convexity_sweep(const RonkinField& field, double tol) {
  const auto& spec = field.spec;
  const int n = spec.dim();
  std::vector<std::vector<int>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<int> d(n, 0);
    d[i] = 1;
    dirs.push_back(d);
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> p(n, 0), q(n, 0);
      p[i] = p[j] = 1;
      q[i] = 1;
      q[j] = -1;
      dirs.push_back(p);
      dirs.push_back(q);
    }
  }
  ConvexitySweep out;
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    const auto idx = spec.unravel(c);
    for (const auto& d : dirs) {
      bool fits = true;
      std::ptrdiff_t off = 0;
      for (int j = 0; j < n; ++j) {
        fits = fits && idx[j] - std::abs(d[j]) >= 0 && idx[j] + std::abs(d[j]) < spec.counts()[j];
        off += static_cast<std::ptrdiff_t>(spec.stride(j)) * d[j];
      }
      if (!fits) continue;
      ++out.checks;
      const double v = field.values[c];
      const double second = field.values[c + off] - 2 * v + field.values[c - off];
      const double scaled = second / (1.0 + std::abs(v));
      out.worst = std::min(out.worst, scaled);
      if (second < -tol * (1.0 + std::abs(v))) ++out.violations;
    }
  }
  return out;
}

std::vector<ComponentFit> component_fits(const RonkinField& field, const GridRegion& amoeba, int erosion) {
  if (!(field.spec == amoeba.spec)) throw UsageError("component_fits: field and raster grids differ");
  const auto& spec = field.spec;
  const int n = spec.dim();
  std::vector<ComponentFit> fits;
  for (const auto& comp : complement_components(amoeba)) {
    ComponentFit fit;
    fit.window_truncated = comp.window_truncated;
    std::vector<std::uint8_t> outside(spec.cell_count(), 1);
    for (auto c : comp.cells) outside[c] = 0;
    const auto dist = cell_distance(spec, outside);
    std::vector<std::size_t> kept;
    for (auto c : comp.cells)
      if (dist[c] < 0 || dist[c] > erosion) kept.push_back(c);
    if (kept.size() < static_cast<std::size_t>(n + 1)) {
      fits.push_back(std::move(fit));
      continue;
    }
    // normal equations in coordinates centred on the kept cells
    std::vector<double> mean(n, 0.0);
    for (auto c : kept) {
      const auto y = spec.center(c);
      for (int j = 0; j < n; ++j) mean[j] += y[j];
    }
    for (auto& m : mean) m /= static_cast<double>(kept.size());
    CMatrix a(n + 1, n + 1);
    std::vector<cplx> rhs(n + 1, 0.0);
    std::vector<double> row(n + 1);
    for (auto c : kept) {
      const auto y = spec.center(c);
      row[0] = 1.0;
      for (int j = 0; j < n; ++j) row[j + 1] = y[j] - mean[j];
      for (int r = 0; r <= n; ++r) {
        rhs[r] += row[r] * field.values[c];
        for (int s = 0; s <= n; ++s) a(r, s) += row[r] * row[s];
      }
    }
    const auto sol = solve(a, rhs, 1e-14);
    if (!sol) {
      fits.push_back(std::move(fit));
      continue;
    }
    fit.cells_used = kept.size();
    fit.gradient.resize(n);
    double intercept = (*sol)[0].real();
    for (int j = 0; j < n; ++j) {
      fit.gradient[j] = (*sol)[j + 1].real();
      intercept -= fit.gradient[j] * mean[j];
    }
    fit.intercept = intercept;
    for (auto c : kept) {
      const auto y = spec.center(c);
      double pred = intercept;
      for (int j = 0; j < n; ++j) pred += fit.gradient[j] * y[j];
      fit.max_residual = std::max(fit.max_residual, std::abs(pred - field.values[c]));
    }
    fits.push_back(std::move(fit));
  }
  return fits;
}

}  // namespace amoebakit
