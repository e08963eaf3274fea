#include "amoebakit/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

constexpr double kNegligible = 1e-300;

std::vector<Term> canonicalize(int n, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponent.size()) != n) {
      throw UsageError("exponent length " + std::to_string(t.exponent.size()) +
                       " does not match dimension " + std::to_string(n));
    }
    if (!std::isfinite(t.coef.real()) || !std::isfinite(t.coef.imag())) {
      throw UsageError("non-finite coefficient");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().exponent == t.exponent) {
      out.back().coef += t.coef;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.coef) < kNegligible; });
  return out;
}

}  // namespace

cplx ipow(cplx z, int k) {
  if (k < 0) return cplx(1.0) / ipow(z, -k);
  cplx result(1.0);
  cplx base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

LaurentPolynomial::LaurentPolynomial(int n, std::vector<Term> terms) : n_(n) {
  if (n < 1) throw UsageError("dimension must be positive");
  terms_ = canonicalize(n, std::move(terms));
  if (terms_.empty()) throw DegenerateError("zero polynomial is not representable");
}

LaurentPolynomial LaurentPolynomial::monomial(std::vector<int> exponent, cplx coef) {
  const int n = static_cast<int>(exponent.size());
  return LaurentPolynomial(n, {Term{std::move(exponent), coef}});
}

LaurentPolynomial LaurentPolynomial::constant(int n, cplx c) {
  return LaurentPolynomial(n, {Term{std::vector<int>(static_cast<std::size_t>(n), 0), c}});
}

cplx LaurentPolynomial::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != n_) throw UsageError("point dimension mismatch");
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j] == cplx(0.0)) {
      throw DomainError("coordinate z" + std::to_string(j + 1) + " is zero");
    }
  }
  cplx sum(0.0);
  for (const auto& t : terms_) {
    cplx m = t.coef;
    for (int j = 0; j < n_; ++j) m *= ipow(z[j], t.exponent[j]);
    sum += m;
  }
  return sum;
}

cplx LaurentPolynomial::eval_fiber(std::span<const double> y, std::span<const double> theta) const {
  if (static_cast<int>(y.size()) != n_ || static_cast<int>(theta.size()) != n_) {
    throw UsageError("fiber coordinates dimension mismatch");
  }
  // z^e = exp(<e, y> + i <e, theta>) per term avoids overflow in ipow
  cplx sum(0.0);
  for (const auto& t : terms_) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < n_; ++j) {
      re += t.exponent[j] * y[j];
      im += t.exponent[j] * theta[j];
    }
    sum += t.coef * std::polar(std::exp(re), im);
  }
  return sum;
}

bool LaurentPolynomial::depends_on(int axis) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [axis](const Term& t) { return t.exponent[axis] != 0; });
}

bool LaurentPolynomial::varies_in(int axis) const {
  return min_exponent(axis) != max_exponent(axis);
}

int LaurentPolynomial::min_exponent(int axis) const {
  int m = terms_.front().exponent[axis];
  for (const auto& t : terms_) m = std::min(m, t.exponent[axis]);
  return m;
}

int LaurentPolynomial::max_exponent(int axis) const {
  int m = terms_.front().exponent[axis];
  for (const auto& t : terms_) m = std::max(m, t.exponent[axis]);
  return m;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const {
  if (other.n_ != n_) throw UsageError("product of polynomials of different dimension");
  std::vector<Term> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      std::vector<int> e(a.exponent);
      for (int j = 0; j < n_; ++j) e[j] += b.exponent[j];
      out.push_back({std::move(e), a.coef * b.coef});
    }
  }
  return LaurentPolynomial(n_, std::move(out));
}

LaurentPolynomial LaurentPolynomial::scaled(cplx c) const {
  std::vector<Term> out(terms_);
  for (auto& t : out) t.coef *= c;
  return LaurentPolynomial(n_, std::move(out));
}

LaurentPolynomial LaurentPolynomial::rescaled_variables(std::span<const cplx> a) const {
  if (static_cast<int>(a.size()) != n_) throw UsageError("scaling vector dimension mismatch");
  std::vector<Term> out(terms_);
  for (auto& t : out) {
    for (int j = 0; j < n_; ++j) {
      if (a[j] == cplx(0.0)) throw DomainError("zero scaling factor");
      t.coef *= ipow(a[j], t.exponent[j]);
    }
  }
  return LaurentPolynomial(n_, std::move(out));
}

bool LaurentPolynomial::operator==(const LaurentPolynomial& other) const {
  if (n_ != other.n_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].exponent != other.terms_[i].exponent || terms_[i].coef != other.terms_[i].coef) {
      return false;
    }
  }
  return true;
}

std::string LaurentPolynomial::to_string() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    const bool unit = t.coef == cplx(1.0);
    const bool is_const = std::all_of(t.exponent.begin(), t.exponent.end(), [](int e) { return e == 0; });
    if (!unit || is_const) {
      if (t.coef.imag() == 0.0) {
        os << t.coef.real();
      } else {
        os << "(" << t.coef.real() << (t.coef.imag() < 0 ? "-" : "+") << std::abs(t.coef.imag()) << "i)";
      }
    }
    for (int j = 0; j < n_; ++j) {
      const int e = t.exponent[j];
      if (e == 0) continue;
      os << "z" << (j + 1);
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

std::uint64_t LaurentPolynomial::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  mix(&n_, sizeof(n_));
  for (const auto& t : terms_) {
    mix(t.exponent.data(), t.exponent.size() * sizeof(int));
    const double re = t.coef.real(), im = t.coef.imag();
    mix(&re, sizeof(re));
    mix(&im, sizeof(im));
  }
  return h;
}

std::optional<LaurentPolynomial> partial_derivative(const LaurentPolynomial& p, int axis) {
  if (axis < 0 || axis >= p.dim()) throw UsageError("axis out of range");
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    const int e = t.exponent[axis];
    if (e == 0) continue;
    std::vector<int> ex(t.exponent);
    ex[axis] -= 1;
    out.push_back({std::move(ex), t.coef * static_cast<double>(e)});
  }
  if (out.empty()) return std::nullopt;
  return LaurentPolynomial(p.dim(), std::move(out));
}

std::optional<UnivariateRestriction> univariate_restrict(const LaurentPolynomial& p, int axis,
                                                         std::span<const cplx> values) {
  const int n = p.dim();
  if (axis < 0 || axis >= n) throw UsageError("axis out of range");
  if (static_cast<int>(values.size()) != n) throw UsageError("fixed values dimension mismatch");
  for (int j = 0; j < n; ++j) {
    if (j != axis && values[j] == cplx(0.0)) {
      throw DomainError("fixed value for z" + std::to_string(j + 1) + " is zero");
    }
  }
  const int lo = p.min_exponent(axis);
  const int hi = p.max_exponent(axis);
  std::vector<cplx> coeffs(static_cast<std::size_t>(hi - lo + 1), cplx(0.0));
  double scale = 0.0;
  for (const auto& t : p.terms()) {
    cplx m = t.coef;
    for (int j = 0; j < n; ++j) {
      if (j != axis) m *= ipow(values[j], t.exponent[j]);
    }
    coeffs[static_cast<std::size_t>(t.exponent[axis] - lo)] += m;
    scale = std::max(scale, std::abs(m));
  }
  // cancellation to rounding level counts as an exact zero
  const double cut = std::max(1e-300, 1e-14 * scale);
  for (auto& c : coeffs) {
    if (std::abs(c) <= cut) c = 0.0;
  }
  std::size_t first = 0;
  while (first < coeffs.size() && coeffs[first] == cplx(0.0)) ++first;
  if (first == coeffs.size()) return std::nullopt;
  std::size_t last = coeffs.size();
  while (coeffs[last - 1] == cplx(0.0)) --last;
  UnivariateRestriction r;
  r.coeffs.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(first),
                  coeffs.begin() + static_cast<std::ptrdiff_t>(last));
  r.shift = lo + static_cast<int>(first);
  return r;
}

}  // namespace amoebakit
