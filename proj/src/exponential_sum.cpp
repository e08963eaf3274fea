#include "amoebakit/exponential_sum.hpp"

#include <algorithm>
#include <cmath>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

constexpr double kNegligible = 1e-300;
const cplx kI(0.0, 1.0);

}  // namespace

ExponentialSum::ExponentialSum(int n, std::vector<ExpTerm> terms) : n_(n) {
  if (n < 1) throw UsageError("dimension must be positive");
  for (const auto& t : terms) {
    if (static_cast<int>(t.frequency.size()) != n) {
      throw UsageError("frequency length does not match dimension");
    }
    for (double f : t.frequency) {
      if (!std::isfinite(f)) throw UsageError("non-finite frequency");
    }
    if (!std::isfinite(t.coef.real()) || !std::isfinite(t.coef.imag())) {
      throw UsageError("non-finite coefficient");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const ExpTerm& a, const ExpTerm& b) { return a.frequency < b.frequency; });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().frequency == t.frequency) {
      terms_.back().coef += t.coef;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [](const ExpTerm& t) { return std::abs(t.coef) < kNegligible; });
  if (terms_.empty()) throw DegenerateError("zero exponential sum is not representable");
}

cplx ExponentialSum::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != n_) throw UsageError("point dimension mismatch");
  cplx sum(0.0);
  for (const auto& t : terms_) {
    cplx phase(0.0);
    for (int j = 0; j < n_; ++j) phase += t.frequency[j] * z[j];
    sum += t.coef * std::exp(kI * phase);
  }
  return sum;
}

cplx ExponentialSum::value(cplx z) const {
  if (n_ != 1) throw UsageError("value(z) requires a one-variable sum");
  cplx sum(0.0);
  for (const auto& t : terms_) sum += t.coef * std::exp(kI * t.frequency[0] * z);
  return sum;
}

cplx ExponentialSum::derivative(cplx z) const {
  if (n_ != 1) throw UsageError("derivative(z) requires a one-variable sum");
  cplx sum(0.0);
  for (const auto& t : terms_) {
    sum += kI * t.frequency[0] * t.coef * std::exp(kI * t.frequency[0] * z);
  }
  return sum;
}

bool ExponentialSum::has_integer_frequencies() const {
  for (const auto& t : terms_) {
    for (double f : t.frequency) {
      if (f != std::round(f)) return false;
    }
  }
  return true;
}

ExponentialSum ExponentialSum::operator*(const ExponentialSum& other) const {
  if (other.n_ != n_) throw UsageError("product of sums of different dimension");
  std::vector<ExpTerm> out;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      std::vector<double> f(a.frequency);
      for (int j = 0; j < n_; ++j) f[j] += b.frequency[j];
      out.push_back({std::move(f), a.coef * b.coef});
    }
  }
  return ExponentialSum(n_, std::move(out));
}

ExponentialSum ExponentialSum::shifted_frequency(double c) const {
  if (n_ != 1) throw UsageError("shifted_frequency requires a one-variable sum");
  std::vector<ExpTerm> out(terms_);
  for (auto& t : out) t.frequency[0] += c;
  return ExponentialSum(n_, std::move(out));
}

ExponentialSum pullback_exponential(const LaurentPolynomial& p) {
  std::vector<ExpTerm> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::vector<double> f(t.exponent.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = -static_cast<double>(t.exponent[j]);
    out.push_back({std::move(f), t.coef});
  }
  return ExponentialSum(p.dim(), std::move(out));
}

}  // namespace amoebakit
