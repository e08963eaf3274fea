#include "amoebakit/argument.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

struct BoundaryTooClose {};

class EdgeIntegrator {
 public:
  EdgeIntegrator(const HolomorphicFn& f, double tol) : f_(f), tol_(tol) {}

  cplx integrate(cplx a, cplx b, double max_step) {
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / max_step)));
    cplx total(0.0);
    for (int k = 0; k < panels; ++k) {
      const cplx za = a + (b - a) * (static_cast<double>(k) / panels);
      const cplx zb = a + (b - a) * (static_cast<double>(k + 1) / panels);
      const cplx zm = 0.5 * (za + zb);
      const cplx ga = g(za), gb = g(zb), gm = g(zm);
      total += adaptive(za, zb, ga, gm, gb, simpson(za, zb, ga, gm, gb), 0);
    }
    return total;
  }

 private:
  cplx g(cplx z) {
    if (++evaluations_ > kMaxEvaluations) {
      throw NumericError("argument_count: contour integrand did not settle within the evaluation budget");
    }
    const auto [v, dv] = f_(z);
    if (v == cplx(0.0) || std::abs(v) < tol_ * std::abs(dv)) throw BoundaryTooClose{};
    return dv / v;
  }

  static cplx simpson(cplx a, cplx b, cplx ga, cplx gm, cplx gb) { return (b - a) / 6.0 * (ga + 4.0 * gm + gb); }

  cplx adaptive(cplx a, cplx b, cplx ga, cplx gm, cplx gb, cplx whole, int depth) {
    const cplx m = 0.5 * (a + b);
    const cplx lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx glm = g(lm), grm = g(rm);
    const cplx left = simpson(a, m, ga, glm, gm);
    const cplx right = simpson(m, b, gm, grm, gb);
    const cplx diff = left + right - whole;
    if (depth >= 40 || std::abs(diff) <= 1e-10 * 15.0) return left + right + diff / 15.0;
    return adaptive(a, m, ga, glm, gm, left, depth + 1) + adaptive(m, b, gm, grm, gb, right, depth + 1);
  }

  static constexpr long kMaxEvaluations = 200000;

  const HolomorphicFn& f_;
  double tol_;
  long evaluations_ = 0;
};

std::string describe(const Box& b) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << b.x0 << ", " << b.x1 << "] x [" << b.y0 << ", " << b.y1 << "]";
  return os.str();
}

}  // namespace

std::optional<ArgumentCount> try_argument_count(const HolomorphicFn& f, const Box& box,
                                                const ArgumentOptions& opts) {
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) throw UsageError("argument_count: empty box");
  EdgeIntegrator edge(f, opts.tol);
  const cplx c00(box.x0, box.y0), c10(box.x1, box.y0), c11(box.x1, box.y1), c01(box.x0, box.y1);
  cplx integral(0.0);
  try {
    integral += edge.integrate(c00, c10, opts.max_step);
    integral += edge.integrate(c10, c11, opts.max_step);
    integral += edge.integrate(c11, c01, opts.max_step);
    integral += edge.integrate(c01, c00, opts.max_step);
  } catch (const BoundaryTooClose&) {
    return std::nullopt;
  }
  const cplx winding = integral / cplx(0.0, 2.0 * std::numbers::pi);
  ArgumentCount r;
  r.count = static_cast<int>(std::lround(winding.real()));
  r.residual = std::abs(winding - cplx(r.count, 0.0));
  r.box = box;
  if (r.residual >= 0.1) {
    throw NumericError("argument_count: rounding residual " + std::to_string(r.residual) + " on box " +
                       describe(box));
  }
  return r;
}

ArgumentCount argument_count(const HolomorphicFn& f, const Box& box, const ArgumentOptions& opts) {
  if (auto r = try_argument_count(f, box, opts)) return *r;
  if (opts.allow_jitter) {
    const Box grown{box.x0 - opts.tol, box.x1 + opts.tol, box.y0 - opts.tol, box.y1 + opts.tol};
    if (auto r = try_argument_count(f, grown, opts)) {
      r->jittered = true;
      return *r;
    }
  }
  throw NumericError("argument_count: zero suspected on the boundary of " + describe(box));
}

}  // namespace amoebakit
