#include "amoebakit/ap_mean.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "amoebakit/error.hpp"
#include "amoebakit/newton.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/raster.hpp"
#include "amoebakit/ronkin.hpp"
#include "amoebakit/sampling.hpp"

namespace amoebakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kChunks = 64;
constexpr double kMaxSamples = 4e9;

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::string point_text(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
  os << ')';
  return os.str();
}

// sample(x, cell) returns f at x; it may move x itself.
using Sampler = std::function<double(std::vector<double>& x, double cell)>;

double cube_average(int n, double s, int spu, const Sampler& sample) {
  const double per_axis = std::ceil(2.0 * s * spu);
  if (std::pow(per_axis, n) > kMaxSamples) throw UsageError("ladder entry needs too many samples");
  const auto M = static_cast<std::size_t>(per_axis);
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= M;
  const double cell = 2.0 * s / static_cast<double>(M);
  std::vector<Neumaier> partial(kChunks);
  parallel_for(kChunks, [&](std::size_t c) {
    const std::size_t begin = total * c / kChunks, end = total * (c + 1) / kChunks;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t r = idx;
      for (int j = 0; j < n; ++j) {
        x[j] = -s + (static_cast<double>(r % M) + 0.5) * cell;
        r /= M;
      }
      partial[c].add(sample(x, cell));
    }
  });
  Neumaier sum;
  for (const auto& p : partial) {
    sum.add(p.sum);
    sum.add(p.comp);
  }
  return sum.value() / static_cast<double>(total);
}

double fit_intercept(const std::vector<double>& s, const std::vector<double>& v) {
  // least squares v = a + b / s
  const std::size_t k = s.size();
  double mu = 0, mv = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mu += 1.0 / s[i];
    mv += v[i];
  }
  mu /= k;
  mv /= k;
  double suu = 0, suv = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double du = 1.0 / s[i] - mu;
    suu += du * du;
    suv += du * (v[i] - mv);
  }
  if (suu == 0.0) return mv;
  return mv - (suv / suu) * mu;
}

// spread over the top half and intercept over the top three entries
void summarize(const std::vector<double>& s, const std::vector<double>& v, double& spread, double& extrapolated) {
  const std::size_t k = s.size();
  const std::size_t half = (k + 1) / 2;
  const auto top = v.end() - static_cast<std::ptrdiff_t>(half);
  spread = *std::max_element(top, v.end()) - *std::min_element(top, v.end());
  const std::size_t f = std::min<std::size_t>(3, k);
  extrapolated = fit_intercept(std::vector<double>(s.end() - f, s.end()), std::vector<double>(v.end() - f, v.end()));
}

BohrMean ladder_mean(int n, const LadderSpec& ladder, const Sampler& sample) {
  ladder.validate();
  BohrMean out;
  std::vector<double> vals;
  for (double s : ladder.s_values) {
    const double v = cube_average(n, s, ladder.samples_per_unit, sample);
    out.table.push_back({s, v});
    vals.push_back(v);
  }
  out.estimate = vals.back();
  summarize(ladder.s_values, vals, out.spread, out.extrapolated);
  return out;
}

std::pair<cplx, cplx> value_and_derivative(const ExponentialSum& f, cplx z) {
  return {f.value(z), f.derivative(z)};
}

// sum of |c_j| |exp(i lambda_j z)|, the natural size of f near z
double local_scale(const ExponentialSum& f, cplx z) {
  double s = 0.0;
  for (const auto& t : f.terms()) s += std::abs(t.coef) * std::exp(-t.frequency[0] * z.imag());
  return s;
}

std::string box_text(const Box& b) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << b.x0 << ", " << b.x1 << "] x [" << b.y0 << ", " << b.y1 << "]";
  return os.str();
}

class ZeroLocator {
 public:
  ZeroLocator(const ExponentialSum& f, const ZeroOptions& opts)
      : f_(f), opts_(opts), fn_([&f](cplx z) { return value_and_derivative(f, z); }) {
    aopts_.tol = opts.tol;
    aopts_.allow_jitter = false;
  }

  const HolomorphicFn& fn() const { return fn_; }
  const ArgumentOptions& argument_options() const { return aopts_; }

  void resolve(const Box& b, int count, int depth) {
    if (count == 0) return;
    const double size = std::max(b.width(), b.height());
    if (count == 1) {
      if (auto z = polish(b, 1)) {
        zeros.push_back({*z, 1});
        return;
      }
      if (size < opts_.min_width) {
        zeros.push_back({b.center(), 1});
        return;
      }
    } else if (auto z = cluster(b, count)) {
      if (count > opts_.max_multiplicity) {
        throw NumericError("zero of multiplicity " + std::to_string(count) + " exceeds the cap near " +
                           box_text(Box{z->real(), z->real(), z->imag(), z->imag()}));
      }
      zeros.push_back({*z, count});
      return;
    } else if (size < opts_.min_width) {
      if (count > opts_.max_multiplicity) {
        throw NumericError("zero cluster of multiplicity " + std::to_string(count) + " exceeds the cap in " +
                           box_text(b));
      }
      zeros.push_back({polish(b, count).value_or(b.center()), count});
      return;
    }
    if (depth >= opts_.max_depth) {
      unresolved.push_back(b);
      return;
    }
    const bool split_x = b.width() >= b.height();
    for (int k = 0; k < 9; ++k) {
      const double t = 0.5 + 0.0137 * ((k + 1) / 2) * (k % 2 ? 1.0 : -1.0);
      Box lo = b, hi = b;
      if (split_x) {
        lo.x1 = hi.x0 = b.x0 + t * b.width();
      } else {
        lo.y1 = hi.y0 = b.y0 + t * b.height();
      }
      const auto c_lo = try_argument_count(fn_, lo, aopts_);
      if (!c_lo) continue;
      const auto c_hi = try_argument_count(fn_, hi, aopts_);
      if (!c_hi || c_lo->count + c_hi->count != count) continue;
      resolve(lo, c_lo->count, depth + 1);
      resolve(hi, c_hi->count, depth + 1);
      return;
    }
    unresolved.push_back(b);
  }

  std::vector<LocatedZero> zeros;
  std::vector<Box> unresolved;

 private:
  // Newton from the box center, with the multiplicity-corrected step for m > 1.
  std::optional<cplx> polish(const Box& b, int m) const {
    const SystemFn sys = [&](std::span<const cplx> x, std::vector<cplx>& F, CMatrix& J) {
      const auto [v, d] = value_and_derivative(f_, x[0]);
      F[0] = v;
      J(0, 0) = d / static_cast<double>(m);
    };
    const double scale = local_scale(f_, b.center());
    const NewtonResult r = newton_polish(sys, {b.center()}, 60, 1e-14 * scale);
    if (!(r.converged || r.residual <= 1e-10 * scale)) return std::nullopt;
    if (!b.contains(r.x[0])) return std::nullopt;
    return r.x[0];
  }

  // All `count` zeros within a few argument-count tolerances of one polished
  // point: a zero of that multiplicity.
  // The radius keeps the rounding noise of f, about eps / r^count relative,
  // well below the contour integration tolerance.
  std::optional<cplx> cluster(const Box& b, int count) const {
    const auto z = polish(b, count);
    if (!z) return std::nullopt;
    const double r = std::max(10.0 * count * opts_.tol, std::pow(1e-6, 1.0 / count));
    const Box near{z->real() - r, z->real() + r, z->imag() - r, z->imag() + r};
    try {
      const auto c = try_argument_count(fn_, near, aopts_);
      if (!c || c->count != count) return std::nullopt;
    } catch (const NumericError&) {
      return std::nullopt;
    }
    return z;
  }

  const ExponentialSum& f_;
  ZeroOptions opts_;
  HolomorphicFn fn_;
  ArgumentOptions aopts_;
};

ZeroChainSample locate(const ExponentialSum& f, const Box& box, const ZeroOptions& opts, bool allow_jitter) {
  if (f.dim() != 1) throw UsageError("zero location requires a one-variable sum");
  ZeroLocator loc(f, opts);
  ArgumentOptions top_opts = loc.argument_options();
  top_opts.allow_jitter = allow_jitter;
  const ArgumentCount top = argument_count(loc.fn(), box, top_opts);
  loc.resolve(top.box, top.count, 0);
  if (!loc.unresolved.empty()) {
    std::string list;
    for (const auto& b : loc.unresolved) list += (list.empty() ? "" : "; ") + box_text(b);
    throw NumericError("zero bisection did not resolve: " + list);
  }
  ZeroChainSample out;
  out.box = top.box;
  out.count = top.count;
  out.zeros = std::move(loc.zeros);
  std::sort(out.zeros.begin(), out.zeros.end(), [](const LocatedZero& a, const LocatedZero& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });
  return out;
}

// Moves x away from zeros near the vertical segment x + i(g0, g1): the
// Newton distance |f/f'| sampled along it must exceed the sample spacing.
double clear_breakpoint(const ExponentialSum& f, double x, double g0, double g1, double width) {
  constexpr int kSamples = 64;
  const double spacing = (g1 - g0) / kSamples;
  for (int k = 0; k < 16; ++k) {
    const double xk = x + 0.0137 * width * ((k + 1) / 2) * (k % 2 ? 1.0 : -1.0);
    bool clear = true;
    for (int j = 0; j <= kSamples && clear; ++j) {
      const cplx z(xk, g0 + j * spacing);
      const cplx d = f.derivative(z);
      const double nd = std::abs(d) == 0.0 ? HUGE_VAL : std::abs(f.value(z) / d);
      clear = nd > spacing;
    }
    if (clear) return xk;
  }
  throw NumericError("no zero-free breakpoint near x = " + std::to_string(x));
}

}  // namespace

void LadderSpec::validate() const {
  if (s_values.size() < 3) throw UsageError("ladder needs at least 3 entries");
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    if (!(s_values[i] > 0.0) || !std::isfinite(s_values[i])) throw UsageError("ladder entries must be positive");
    if (i > 0 && !(s_values[i] > s_values[i - 1])) throw UsageError("ladder entries must increase");
  }
  if (s_values.back() / s_values.front() < 10.0) throw UsageError("ladder must span a factor of 10");
  if (samples_per_unit < 1) throw UsageError("samples_per_unit must be positive");
}

BohrMean bohr_mean(const RealFn& f, int n, const LadderSpec& ladder) {
  if (n < 1) throw UsageError("dimension must be positive");
  return ladder_mean(n, ladder, [&](std::vector<double>& x, double) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericError("non-finite sample at " + point_text(x));
    return v;
  });
}

bool has_integer_frequency_lattice(const ExponentialSum& f) {
  const auto terms = f.terms();
  const auto& base = terms[0].frequency;
  for (const auto& t : terms) {
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double d = t.frequency[j] - base[j];
      if (std::abs(d - std::round(d)) > 1e-12 * std::max(1.0, std::abs(d))) return false;
    }
  }
  return true;
}

BohrMean mean_log_modulus_ladder(const ExponentialSum& f, std::span<const double> y, const LadderSpec& ladder,
                                 int torus_nodes) {
  const int n = f.dim();
  if (static_cast<int>(y.size()) != n) throw UsageError("y has the wrong dimension");
  ladder.validate();
  if (has_integer_frequency_lattice(f)) {
    const auto terms = f.terms();
    const auto& base = terms[0].frequency;
    std::vector<Term> q;
    for (const auto& t : terms) {
      std::vector<int> e(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) e[j] = static_cast<int>(std::lround(t.frequency[j] - base[j]));
      q.push_back({std::move(e), t.coef});
    }
    std::vector<double> minus_y(y.begin(), y.end());
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      minus_y[j] = -y[j];
      shift -= base[j] * y[j];
    }
    const LaurentPolynomial Q(n, std::move(q));
    const double v = shift + ronkin_value_estimate(Q, minus_y, QuadratureSpec{torus_nodes, n}).value;
    BohrMean out;
    out.torus = true;
    out.estimate = out.extrapolated = v;
    for (double s : ladder.s_values) out.table.push_back({s, v});
    return out;
  }
  const std::vector<double> yy(y.begin(), y.end());
  return ladder_mean(n, ladder, [&](std::vector<double>& x, double cell) {
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 2; ++attempt) {
      for (int j = 0; j < n; ++j) z[j] = cplx(x[j], yy[j]);
      const double v = std::log(std::abs(f(z)));
      if (std::isfinite(v)) return v;
      for (double& xj : x) xj += 0.5 * cell;
    }
    throw NumericError("log|f| is singular at x = " + point_text(x) + " after a half-cell shift");
  });
}

double mean_log_modulus(const ExponentialSum& f, std::span<const double> y, const LadderSpec& ladder,
                        int torus_nodes) {
  return mean_log_modulus_ladder(f, y, ladder, torus_nodes).estimate;
}

ZeroChainSample zeros_in_box(const ExponentialSum& f, const Box& box, const ZeroOptions& opts) {
  return locate(f, box, opts, true);
}

DensityEstimate zero_density(const ExponentialSum& f, double g0, double g1, const LadderSpec& ladder,
                             const DensityOptions& opts) {
  if (f.dim() != 1) throw UsageError("zero density requires a one-variable sum");
  if (!(g1 > g0)) throw UsageError("strip must be a nonempty interval");
  ladder.validate();
  for (double g : {g0, g1}) {
    const double m = opts.margin;
    const double a = mean_log_modulus(f, std::vector<double>{g - m}, ladder, opts.torus_nodes);
    const double b = mean_log_modulus(f, std::vector<double>{g}, ladder, opts.torus_nodes);
    const double c = mean_log_modulus(f, std::vector<double>{g + m}, ladder, opts.torus_nodes);
    if (std::abs(a - 2.0 * b + c) > opts.margin_tol) {
      std::ostringstream os;
      os << "strip edge y = " << g << " lies within " << m << " of the amoeba (second difference "
         << (a - 2.0 * b + c) << ")";
      throw DomainError(os.str());
    }
  }
  DensityEstimate out;
  out.g0 = g0;
  out.g1 = g1;
  std::vector<double> vals;
  for (double s : ladder.s_values) {
    const auto tiles = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * s / opts.tile_width)));
    const double w = 2.0 * s / static_cast<double>(tiles);
    std::vector<double> cuts(tiles + 1);
    parallel_for(tiles + 1, [&](std::size_t k) {
      cuts[k] = clear_breakpoint(f, -s + static_cast<double>(k) * w, g0, g1, w);
    });
    std::vector<ZeroChainSample> parts(tiles);
    parallel_for(tiles, [&](std::size_t k) {
      parts[k] = locate(f, Box{cuts[k], cuts[k + 1], g0, g1}, opts.zero, false);
    });
    long count = 0;
    for (const auto& p : parts) count += p.count;
    const double est = static_cast<double>(count) / (2.0 * s);
    out.table.push_back({s, count, est});
    vals.push_back(est);
    if (s == ladder.s_values.back()) {
      for (const auto& p : parts) out.zeros.insert(out.zeros.end(), p.zeros.begin(), p.zeros.end());
    }
  }
  summarize(ladder.s_values, vals, out.spread, out.extrapolated);
  return out;
}

SlopeJumpMeasure slope_jump_measure(const ExponentialSum& f, const GridSpec& y_grid, const LadderSpec& ladder,
                                    int torus_nodes) {
  if (f.dim() != 1 || y_grid.dim() != 1) throw UsageError("slope-jump measure is one-dimensional");
  const std::size_t cells = y_grid.cell_count();
  if (cells < 3) throw UsageError("slope-jump measure needs at least 3 grid points");
  SlopeJumpMeasure out{y_grid, std::vector<double>(cells), std::vector<double>(cells, 0.0), 0.0};
  parallel_for(cells, [&](std::size_t i) {
    out.mean[i] = mean_log_modulus(f, std::vector<double>{y_grid.center(0, static_cast<int>(i))}, ladder, torus_nodes);
  });
  const double h = y_grid.h();
  Neumaier total;
  for (std::size_t i = 1; i + 1 < cells; ++i) {
    out.mass[i] = (out.mean[i - 1] - 2.0 * out.mean[i] + out.mean[i + 1]) / h / kTwoPi;
    total.add(out.mass[i]);
  }
  out.total = total.value();
  return out;
}

GridRegion zero_amoeba(std::span<const LocatedZero> zeros, const GridSpec& y_grid) {
  if (y_grid.dim() != 1) throw UsageError("zero amoeba lives on a one-dimensional grid");
  PointCloud cloud;
  cloud.n = 1;
  for (const auto& z : zeros) {
    cloud.coords.push_back(z.z.imag());
    cloud.outside.push_back(0);
  }
  return rasterize(cloud, y_grid, y_grid.h());
}

PullbackReport pullback_consistency(const LaurentPolynomial& p, const std::vector<std::vector<double>>& y_list,
                                    const QuadratureSpec& quad, const LadderSpec& ladder) {
  quad.validate();
  const ExponentialSum f = pullback_exponential(p);
  PullbackReport out;
  for (const auto& y : y_list) {
    const double m = mean_log_modulus(f, y, ladder, 2 * quad.nodes_per_axis);
    const double n = ronkin_value(p, y, QuadratureSpec{quad.nodes_per_axis, p.dim()});
    out.deviations.push_back(std::abs(m - n));
    out.max_deviation = std::max(out.max_deviation, out.deviations.back());
  }
  return out;
}

}  // namespace amoebakit
