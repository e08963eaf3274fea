#include "amoebakit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amoebakit {

std::optional<std::vector<cplx>> solve(CMatrix a, std::vector<cplx> b, double rel_tol) {
  const std::size_t n = a.rows;
  double scale = 0.0;
  for (const auto& v : a.data) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    }
    if (std::abs(a(p, c)) <= rel_tol * scale) return std::nullopt;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      std::swap(b[p], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = a(r, c) / a(c, c);
      if (f == cplx(0.0)) continue;
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b[r] -= f * b[c];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

cplx determinant(CMatrix a) {
  const std::size_t n = a.rows;
  cplx det(1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    }
    if (a(p, c) == cplx(0.0)) return 0.0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

double condition_inf(const CMatrix& a) {
  const std::size_t n = a.rows;
  auto row_norm = [n](const CMatrix& m) {
    double best = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += std::abs(m(r, c));
      best = std::max(best, s);
    }
    return best;
  };
  CMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<cplx> e(n, cplx(0.0));
    e[c] = 1.0;
    auto x = solve(a, e, 0.0);
    if (!x) return std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = (*x)[r];
  }
  return row_norm(a) * row_norm(inv);
}

}  // namespace amoebakit
