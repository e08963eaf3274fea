#pragma once

#include <optional>
#include <span>
#include <vector>

#include "amoebakit/laurent.hpp"

namespace amoebakit {

struct Resultant {
  std::vector<cplx> coeffs;  // ascending powers of u
  int nodes = 0;             // interpolation nodes used
};

/// Resultant with respect to z_v of p1 and p2 restricted to the (z_u, z_v)
/// plane, every other coordinate fixed to values[j]. Both restrictions are
/// first cleared of negative powers, so the result is an ordinary
/// polynomial in z_u, correct up to a monomial factor. Computed from
/// Sylvester determinants at points on the circle |u| = radius followed by
/// discrete Fourier interpolation.
///
/// Returns nullopt when either restriction vanishes identically or neither
/// depends on z_v. Throws NumericError when the interpolant does not close
/// at the expected degree.
std::optional<Resultant> eliminate(const LaurentPolynomial& p1, const LaurentPolynomial& p2, int u_axis,
                                   int v_axis, std::span<const cplx> values, double radius = 1.0);

/// Sylvester resultant of two univariate polynomials (ascending
/// coefficients, leading coefficients taken as given).
cplx sylvester_resultant(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace amoebakit
