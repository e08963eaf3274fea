#include "amoebakit/resultant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "amoebakit/error.hpp"
#include "amoebakit/linalg.hpp"
#include "amoebakit/roots.hpp"

namespace amoebakit {

namespace {

// coefficient grid c[du][dv] of a polynomial in (u, v)
struct Bivariate {
  int du = 0, dv = 0;
  std::vector<std::vector<cplx>> c;  // c[i][k] multiplies u^i v^k
};

std::optional<Bivariate> restrict_bivariate(const LaurentPolynomial& p, int u_axis, int v_axis,
                                            std::span<const cplx> values) {
  const int n = p.dim();
  struct Entry {
    int eu, ev;
    cplx c;
  };
  std::vector<Entry> entries;
  double scale = 0.0;
  for (const auto& t : p.terms()) {
    cplx m = t.coef;
    for (int j = 0; j < n; ++j) {
      if (j == u_axis || j == v_axis) continue;
      if (values[j] == cplx(0.0)) throw DomainError("fixed value is zero");
      m *= ipow(values[j], t.exponent[j]);
    }
    entries.push_back({t.exponent[u_axis], t.exponent[v_axis], m});
    scale = std::max(scale, std::abs(m));
  }
  // merge equal (eu, ev) pairs coming from different fixed-variable powers
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.eu, a.ev) < std::tie(b.eu, b.ev); });
  std::vector<Entry> merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().eu == e.eu && merged.back().ev == e.ev) {
      merged.back().c += e.c;
    } else {
      merged.push_back(e);
    }
  }
  const double cut = std::max(1e-300, 1e-14 * scale);
  std::erase_if(merged, [cut](const Entry& e) { return std::abs(e.c) <= cut; });
  if (merged.empty()) return std::nullopt;
  int umin = merged[0].eu, umax = umin, vmin = merged[0].ev, vmax = vmin;
  for (const auto& e : merged) {
    umin = std::min(umin, e.eu);
    umax = std::max(umax, e.eu);
    vmin = std::min(vmin, e.ev);
    vmax = std::max(vmax, e.ev);
  }
  Bivariate b;
  b.du = umax - umin;
  b.dv = vmax - vmin;
  b.c.assign(static_cast<std::size_t>(b.du + 1), std::vector<cplx>(static_cast<std::size_t>(b.dv + 1), 0.0));
  for (const auto& e : merged) b.c[e.eu - umin][e.ev - vmin] += e.c;
  return b;
}

std::vector<cplx> coefficients_in_v(const Bivariate& b, cplx u) {
  std::vector<cplx> out(static_cast<std::size_t>(b.dv + 1), 0.0);
  cplx upow(1.0);
  for (int i = 0; i <= b.du; ++i) {
    for (int k = 0; k <= b.dv; ++k) out[k] += b.c[i][k] * upow;
    upow *= u;
  }
  return out;
}

}  // namespace

cplx sylvester_resultant(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t da = a.size() - 1;
  const std::size_t db = b.size() - 1;
  const std::size_t size = da + db;
  if (size == 0) return 1.0;
  CMatrix s(size, size);
  for (std::size_t r = 0; r < db; ++r) {
    for (std::size_t k = 0; k <= da; ++k) s(r, r + k) = a[da - k];
  }
  for (std::size_t r = 0; r < da; ++r) {
    for (std::size_t k = 0; k <= db; ++k) s(db + r, r + k) = b[db - k];
  }
  return determinant(std::move(s));
}

std::optional<Resultant> eliminate(const LaurentPolynomial& p1, const LaurentPolynomial& p2, int u_axis,
                                   int v_axis, std::span<const cplx> values, double radius) {
  const int n = p1.dim();
  if (p2.dim() != n) throw UsageError("eliminate: dimension mismatch");
  if (u_axis == v_axis || u_axis < 0 || v_axis < 0 || u_axis >= n || v_axis >= n) {
    throw UsageError("eliminate: invalid axes");
  }
  if (static_cast<int>(values.size()) != n) throw UsageError("eliminate: fixed values dimension mismatch");
  auto b1 = restrict_bivariate(p1, u_axis, v_axis, values);
  auto b2 = restrict_bivariate(p2, u_axis, v_axis, values);
  if (!b1 || !b2) return std::nullopt;
  if (b1->dv + b2->dv == 0) return std::nullopt;

  // degree in u of the Sylvester determinant is at most dv1*du2 + dv2*du1
  const int degree_bound = b1->dv * b2->du + b2->dv * b1->du;
  const int nodes = degree_bound + 2;
  std::vector<cplx> samples(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    const cplx u = std::polar(radius, 2.0 * std::numbers::pi * k / nodes);
    const auto a = coefficients_in_v(*b1, u);
    const auto b = coefficients_in_v(*b2, u);
    samples[k] = sylvester_resultant(a, b);
  }
  std::vector<cplx> coeffs(static_cast<std::size_t>(nodes));
  double scale = 0.0;
  for (int j = 0; j < nodes; ++j) {
    cplx s(0.0);
    for (int k = 0; k < nodes; ++k) {
      s += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(j) * k) % nodes) / nodes);
    }
    coeffs[j] = s / static_cast<double>(nodes) / std::pow(radius, j);
    scale = std::max(scale, std::abs(coeffs[j]));
  }
  // a common factor makes the resultant vanish identically
  auto magnitude = [](const Bivariate& b) {
    double m = 0.0;
    for (const auto& row : b.c) {
      for (const auto& c : row) m += std::abs(c);
    }
    return m;
  };
  const double natural = std::pow(magnitude(*b1), b2->dv) * std::pow(magnitude(*b2), b1->dv);
  if (scale <= 1e-12 * natural) return std::nullopt;
  if (std::abs(coeffs.back()) > 1e-8 * scale) {
    throw NumericError("eliminate: interpolation did not close with " + std::to_string(nodes) +
                       " nodes (conditioning)");
  }
  coeffs.pop_back();
  // interpolation noise on top coefficients
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-11 * scale) coeffs.pop_back();
  for (auto& c : coeffs) {
    if (std::abs(c) <= 1e-13 * scale) c = 0.0;
  }
  return Resultant{std::move(coeffs), nodes};
}

}  // namespace amoebakit
