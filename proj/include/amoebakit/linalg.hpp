#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace amoebakit {

using cplx = std::complex<double>;

/// Dense row-major complex matrix, small sizes only.
struct CMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<cplx> data;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, cplx(0.0)) {}
  cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// LU with partial pivoting. nullopt when a pivot falls below
/// `rel_tol` times the largest entry.
std::optional<std::vector<cplx>> solve(CMatrix a, std::vector<cplx> b, double rel_tol = 1e-14);

cplx determinant(CMatrix a);

/// Infinity-norm condition number estimate ||A|| ||A^-1|| via explicit
/// inversion; +inf when singular.
double condition_inf(const CMatrix& a);

}  // namespace amoebakit
