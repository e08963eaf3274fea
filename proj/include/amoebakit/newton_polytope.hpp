#pragma once

#include <vector>

#include "amoebakit/laurent.hpp"

namespace amoebakit {

/// Convex hull of the exponent vectors, stored by its extreme points in
/// lexicographic order.
struct NewtonPolytope {
  std::vector<std::vector<int>> vertices;

  /// max over vertices of <v, u>.
  double support(std::span<const double> direction) const;
};

NewtonPolytope newton_polytope(const LaurentPolynomial& p);

/// Extreme points of a finite integer point set (any dimension).
std::vector<std::vector<int>> extreme_points(std::vector<std::vector<int>> points);

/// Euclidean distance from x to the polytope, estimated from the support
/// function over a fixed set of unit directions (exact for n == 1, and in
/// 2D accurate to O(1/directions^2)). Zero means x passes every tested
/// half-space.
double polytope_excess(const NewtonPolytope& poly, std::span<const double> x);

}  // namespace amoebakit
