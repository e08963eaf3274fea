#include "amoebakit/newton.hpp"

#include <algorithm>
#include <cmath>

namespace amoebakit {

namespace {

double inf_norm(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

NewtonResult newton_polish(const SystemFn& system, std::vector<cplx> x0, int max_iter, double tol) {
  const std::size_t m = x0.size();
  NewtonResult r;
  r.x = std::move(x0);
  std::vector<cplx> f(m), trial_f(m);
  CMatrix jac(m, m), trial_jac(m, m);
  system(r.x, f, jac);
  r.residual = inf_norm(f);
  while (r.residual > tol && r.iterations < max_iter) {
    ++r.iterations;
    std::vector<cplx> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = -f[i];
    auto step = solve(jac, rhs);
    if (!step) {
      r.singular = true;
      break;
    }
    double lambda = 1.0;
    bool improved = false;
    std::vector<cplx> trial(m);
    for (int halving = 0; halving < 30; ++halving) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = r.x[i] + lambda * (*step)[i];
      system(trial, trial_f, trial_jac);
      const double res = inf_norm(trial_f);
      if (std::isfinite(res) && res < r.residual) {
        improved = true;
        r.x = trial;
        f = trial_f;
        jac = trial_jac;
        r.residual = res;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  r.converged = r.residual <= tol;
  r.condition = condition_inf(jac);
  if (!std::isfinite(r.condition)) r.singular = true;
  return r;
}

}  // namespace amoebakit
