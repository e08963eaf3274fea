#pragma once

#include <complex>
#include <span>
#include <vector>

#include "amoebakit/laurent.hpp"

namespace amoebakit {

struct ExpTerm {
  std::vector<double> frequency;
  cplx coef;
};

/// f(z) = sum_j c_j exp(i <lambda_j, z>) on C^n with real frequencies.
/// Canonicalized like LaurentPolynomial: sorted by frequency, merged,
/// negligible coefficients dropped, never empty.
class ExponentialSum {
 public:
  ExponentialSum(int n, std::vector<ExpTerm> terms);

  int dim() const { return n_; }
  std::span<const ExpTerm> terms() const { return terms_; }

  cplx operator()(std::span<const cplx> z) const;
  /// One-variable convenience: value and derivative at z. Requires dim() == 1.
  cplx value(cplx z) const;
  cplx derivative(cplx z) const;

  /// True when every frequency vector has integer entries, i.e. f is
  /// 2*pi periodic in each real direction.
  bool has_integer_frequencies() const;

  ExponentialSum operator*(const ExponentialSum& other) const;
  /// Product with exp(i c z) for dim() == 1.
  ExponentialSum shifted_frequency(double c) const;

 private:
  int n_;
  std::vector<ExpTerm> terms_;
};

/// The pullback of p under z -> (exp(-i z_1), ..., exp(-i z_n)):
/// each term (e, c) becomes frequency -e with the same coefficient.
ExponentialSum pullback_exponential(const LaurentPolynomial& p);

}  // namespace amoebakit
