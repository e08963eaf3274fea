#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>

namespace amoebakit {

using cplx = std::complex<double>;

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in the complex plane.
struct Box {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  bool contains(cplx z) const { return z.real() > x0 && z.real() < x1 && z.imag() > y0 && z.imag() < y1; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

/// Holomorphic function returning (f(z), f'(z)).
using HolomorphicFn = std::function<std::pair<cplx, cplx>(cplx)>;

struct ArgumentCount {
  int count = 0;
  double residual = 0.0;  // distance of the contour integral / (2 pi i) to `count`
  Box box;                // box actually integrated (after a jitter, if any)
  bool jittered = false;
};

struct ArgumentOptions {
  double tol = 1e-7;       // boundary clearance required, in Newton-distance |f/f'|
  double max_step = 0.25;  // initial panel length along each edge
  bool allow_jitter = true;
};

/// Number of zeros (with multiplicity) of f inside the box from the
/// contour integral of f'/f, by adaptive Simpson refinement of trapezoid
/// panels. A zero suspected within `tol` of the boundary makes the box grow
/// by `tol` once; a second suspicion throws NumericError, as does a
/// rounding residual >= 0.1.
ArgumentCount argument_count(const HolomorphicFn& f, const Box& box, const ArgumentOptions& opts = {});

/// Single attempt without jitter; nullopt on boundary suspicion.
std::optional<ArgumentCount> try_argument_count(const HolomorphicFn& f, const Box& box,
                                                const ArgumentOptions& opts = {});

}  // namespace amoebakit
