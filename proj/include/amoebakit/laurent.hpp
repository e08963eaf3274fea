#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace amoebakit {

using cplx = std::complex<double>;

/// One monomial c * z^e of a Laurent polynomial.
struct Term {
  std::vector<int> exponent;
  cplx coef;
};

/// Finite sum of monomials with integer (possibly negative) exponents in n
/// variables. Immutable; the zero polynomial cannot be represented.
///
/// Terms are kept sorted lexicographically by exponent, duplicates merged and
/// coefficients with magnitude below 1e-300 dropped.
class LaurentPolynomial {
 public:
  /// Throws UsageError on dimension mismatch and DegenerateError when the
  /// canonical form has no terms.
  LaurentPolynomial(int n, std::vector<Term> terms);

  static LaurentPolynomial monomial(std::vector<int> exponent, cplx coef);
  static LaurentPolynomial constant(int n, cplx c);

  int dim() const { return n_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Sum of c * z^e. Throws DomainError if some z_j is zero.
  cplx operator()(std::span<const cplx> z) const;

  /// Value at z_j = exp(y_j + i theta_j).
  cplx eval_fiber(std::span<const double> y, std::span<const double> theta) const;

  /// Some exponent has a nonzero entry on `axis`.
  bool depends_on(int axis) const;
  /// Exponents on `axis` are not all equal, so fibers in z_axis can have roots.
  bool varies_in(int axis) const;
  int min_exponent(int axis) const;
  int max_exponent(int axis) const;

  LaurentPolynomial operator*(const LaurentPolynomial& other) const;
  LaurentPolynomial scaled(cplx c) const;
  /// The polynomial z -> P(a_1 z_1, ..., a_n z_n). All a_j must be nonzero.
  LaurentPolynomial rescaled_variables(std::span<const cplx> a) const;

  bool operator==(const LaurentPolynomial& other) const;

  /// Short human readable form, e.g. "1 + z1 + z2".
  std::string to_string() const;
  /// FNV-1a hash of the canonical terms, stable across runs.
  std::uint64_t hash() const;

 private:
  int n_;
  std::vector<Term> terms_;
};

/// Integer power with negative exponents through the reciprocal.
cplx ipow(cplx z, int k);

/// Formal derivative d/dz_axis (0-based axis). Returns nullopt when the
/// result is the zero polynomial.
std::optional<LaurentPolynomial> partial_derivative(const LaurentPolynomial& p, int axis);

/// Coefficients of an ordinary univariate polynomial (ascending powers) and
/// the power of the variable that was factored out: the restricted Laurent
/// polynomial equals t^shift * sum coeffs[k] t^k.
struct UnivariateRestriction {
  std::vector<cplx> coeffs;
  int shift = 0;
};

/// Views p as a Laurent polynomial in z_axis with every other coordinate
/// fixed to `values[j]` (values[axis] is ignored). Returns nullopt when the
/// restriction vanishes identically (degenerate fiber). Throws DomainError
/// on a zero fixed value.
std::optional<UnivariateRestriction> univariate_restrict(const LaurentPolynomial& p, int axis,
                                                         std::span<const cplx> values);

}  // namespace amoebakit
