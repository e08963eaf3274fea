#pragma once

#include <complex>
#include <span>
#include <vector>

namespace amoebakit {

using cplx = std::complex<double>;

struct RootSet {
  std::vector<cplx> roots;
  std::vector<double> residuals;  // |p(root)| per root
  int degree_deficit = 0;         // leading coefficients stripped as negligible
};

/// Horner evaluation of sum coeffs[k] z^k.
cplx horner(std::span<const cplx> coeffs, cplx z);

/// All roots of sum coeffs[k] z^k (ascending powers). Leading coefficients
/// with magnitude <= `negligible` are stripped first and counted in
/// degree_deficit. Aberth-Ehrlich simultaneous iteration followed by Newton
/// polishing; exact zero roots are split off beforehand.
RootSet roots_univariate(std::span<const cplx> coeffs, double negligible = 1e-300);

}  // namespace amoebakit
