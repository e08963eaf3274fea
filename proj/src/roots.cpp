#include "amoebakit/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

constexpr int kMaxIterations = 600;

// p(z) and p'(z) together
std::pair<cplx, cplx> horner2(std::span<const cplx> c, cplx z) {
  cplx p = c.back(), dp(0.0);
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

// Initial guesses on a circle whose radius is the geometric mean of the
// root moduli, |c0 / cd|^(1/d), rotated off the real axis.
std::vector<cplx> initial_guesses(std::span<const cplx> c) {
  const std::size_t d = c.size() - 1;
  const double radius = std::pow(std::abs(c.front()) / std::abs(c.back()), 1.0 / static_cast<double>(d));
  std::vector<cplx> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(d) + 0.4;
    z[k] = std::polar(radius, angle);
  }
  return z;
}

void aberth(std::span<const cplx> c, std::vector<cplx>& z) {
  const std::size_t d = z.size();
  std::vector<bool> done(d, false);
  for (int it = 0; it < kMaxIterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      auto [p, dp] = horner2(c, z[i]);
      if (p == cplx(0.0)) {
        done[i] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx sum(0.0);
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        done[i] = true;
        continue;
      }
      z[i] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
}

void newton_polish(std::span<const cplx> c, cplx& z) {
  double best = std::abs(horner(c, z));
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    auto [p, dp] = horner2(c, z);
    if (dp == cplx(0.0)) return;
    const cplx candidate = z - p / dp;
    const double r = std::abs(horner(c, candidate));
    if (!(r < best)) return;
    best = r;
    z = candidate;
  }
}

}  // namespace

cplx horner(std::span<const cplx> coeffs, cplx z) {
  cplx p(0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) p = p * z + coeffs[k];
  return p;
}

RootSet roots_univariate(std::span<const cplx> coeffs, double negligible) {
  RootSet out;
  std::size_t hi = coeffs.size();
  while (hi > 0 && std::abs(coeffs[hi - 1]) <= negligible) --hi;
  if (hi == 0) throw UsageError("roots_univariate: all coefficients negligible");
  out.degree_deficit = static_cast<int>(coeffs.size() - hi);
  std::size_t lo = 0;
  while (lo < hi && coeffs[lo] == cplx(0.0)) ++lo;
  for (std::size_t k = 0; k < lo; ++k) out.roots.push_back(0.0);
  std::span<const cplx> c = coeffs.subspan(lo, hi - lo);
  const std::size_t d = c.size() - 1;
  if (d == 1) {
    out.roots.push_back(-c[0] / c[1]);
  } else if (d > 1) {
    std::vector<cplx> z = initial_guesses(c);
    aberth(c, z);
    for (auto& r : z) {
      newton_polish(c, r);
      out.roots.push_back(r);
    }
  }
  for (const auto& r : out.roots) out.residuals.push_back(std::abs(horner(coeffs.first(hi), r)));
  return out;
}

}  // namespace amoebakit
