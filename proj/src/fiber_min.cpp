#include "amoebakit/fiber_min.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amoebakit/error.hpp"

namespace amoebakit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Scaled {
  std::vector<int> exponent;
  cplx weight;  // c * exp(<e, y>)
};

cplx eval(const std::vector<Scaled>& terms, std::span<const double> theta) {
  cplx s(0.0);
  for (const auto& t : terms) {
    double phase = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) phase += t.exponent[j] * theta[j];
    s += t.weight * std::polar(1.0, phase);
  }
  return s;
}

}  // namespace

FiberMin fiber_minimize(const LaurentPolynomial& p, std::span<const double> y, const FiberMinOptions& opts) {
  const int n = p.dim();
  if (static_cast<int>(y.size()) != n) throw UsageError("fiber_minimize: dimension mismatch");
  if (opts.coarse_nodes < 2) throw UsageError("fiber_minimize: need at least 2 coarse nodes");
  std::vector<Scaled> terms;
  for (const auto& t : p.terms()) {
    double re = 0.0;
    for (int j = 0; j < n; ++j) re += t.exponent[j] * y[j];
    terms.push_back({t.exponent, t.coef * std::exp(re)});
  }

  // coarse scan with a roots-of-unity table
  const int N = opts.coarse_nodes;
  std::vector<cplx> omega(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) omega[k] = std::polar(1.0, kTwoPi * k / N);
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(N);
  std::vector<double> values(total);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t node = 0; node < total; ++node) {
    cplx s(0.0);
    for (const auto& t : terms) {
      long long e = 0;
      for (int j = 0; j < n; ++j) e += static_cast<long long>(t.exponent[j]) * idx[j];
      e %= N;
      if (e < 0) e += N;
      s += t.weight * omega[static_cast<std::size_t>(e)];
    }
    values[node] = std::abs(s);
    // lexicographic order: last axis fastest
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[j] < N) break;
      idx[j] = 0;
    }
  }
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opts.starts)), total);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] < values[b] || (values[a] == values[b] && a < b);
                    });
  auto node_theta = [&](std::size_t node) {
    std::vector<double> th(static_cast<std::size_t>(n));
    for (int j = n - 1; j >= 0; --j) {
      th[j] = kTwoPi * static_cast<double>(node % N) / N;
      node /= N;
    }
    return th;
  };

  FiberMin best{values[order[0]], node_theta(order[0])};
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> theta = node_theta(order[s]);
    cplx r = eval(terms, theta);
    double mu = 1e-3;
    for (int step = 0; step < opts.descent_steps; ++step) {
      if (std::abs(r) == 0.0) break;
      // J: 2 x n real Jacobian of (Re P, Im P) in theta
      std::vector<cplx> grad(static_cast<std::size_t>(n), 0.0);
      for (const auto& t : terms) {
        double phase = 0.0;
        for (int j = 0; j < n; ++j) phase += t.exponent[j] * theta[j];
        const cplx v = t.weight * std::polar(1.0, phase) * cplx(0.0, 1.0);
        for (int j = 0; j < n; ++j) grad[j] += static_cast<double>(t.exponent[j]) * v;
      }
      // normal equations (J^T J + mu I) d = -J^T r
      std::vector<double> a(static_cast<std::size_t>(n * n)), b(static_cast<std::size_t>(n));
      double scale = 0.0;
      for (int i = 0; i < n; ++i) {
        b[i] = -(grad[i].real() * r.real() + grad[i].imag() * r.imag());
        for (int j = 0; j < n; ++j) {
          a[i * n + j] = grad[i].real() * grad[j].real() + grad[i].imag() * grad[j].imag();
        }
        scale = std::max(scale, a[i * n + i]);
      }
      if (scale == 0.0) break;
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        std::vector<double> m(a);
        std::vector<double> rhs(b);
        for (int i = 0; i < n; ++i) m[i * n + i] += mu * scale;
        // Gaussian elimination, the system is small and positive definite
        for (int c = 0; c < n; ++c) {
          for (int rr = c + 1; rr < n; ++rr) {
            const double f = m[rr * n + c] / m[c * n + c];
            for (int k = c; k < n; ++k) m[rr * n + k] -= f * m[c * n + k];
            rhs[rr] -= f * rhs[c];
          }
        }
        std::vector<double> d(static_cast<std::size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
          double sum = rhs[i];
          for (int k = i + 1; k < n; ++k) sum -= m[i * n + k] * d[k];
          d[i] = sum / m[i * n + i];
        }
        std::vector<double> trial(theta);
        for (int j = 0; j < n; ++j) {
          trial[j] = std::fmod(trial[j] + d[j], kTwoPi);
          if (trial[j] < 0.0) trial[j] += kTwoPi;
        }
        const cplx rt = eval(terms, trial);
        if (std::abs(rt) < std::abs(r)) {
          theta = trial;
          r = rt;
          mu = std::max(mu * 0.1, 1e-15);
          accepted = true;
        } else {
          mu *= 10.0;
        }
      }
      if (!accepted) break;
    }
    if (std::abs(r) < best.min_modulus) {
      best.min_modulus = std::abs(r);
      best.theta = theta;
    }
  }
  return best;
}

}  // namespace amoebakit
