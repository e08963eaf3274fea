#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "amoebakit/argument.hpp"
#include "amoebakit/error.hpp"
#include "amoebakit/fiber_min.hpp"
#include "amoebakit/laurent.hpp"
#include "amoebakit/newton.hpp"
#include "amoebakit/quadrature.hpp"
#include "amoebakit/resultant.hpp"
#include "amoebakit/roots.hpp"

using namespace amoebakit;
using std::numbers::pi;

namespace {

std::vector<cplx> expand(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = next;
  }
  return c;
}

// max over a of min over b |a - b|, both directions
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double d = 0.0;
    for (const auto& p : x) {
      double m = 1e300;
      for (const auto& q : y) m = std::min(m, std::abs(p - q));
      d = std::max(d, m);
    }
    return d;
  };
  return std::max(directed(a, b), directed(b, a));
}

HolomorphicFn exp_sum_one_plus_eiz() {
  return [](cplx z) {
    const cplx e = std::exp(cplx(0, 1) * z);
    return std::pair<cplx, cplx>{1.0 + e, cplx(0, 1) * e};
  };
}

}  // namespace

TEST_CASE("periodic_mean examples") {
  QuadratureSpec q{64, 1};
  CHECK(periodic_mean([](std::span<const double>) { return 1.0; }, q) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(periodic_mean([](std::span<const double> t) { return std::cos(t[0]); }, q)) <= 1e-15);

  const TorusIntegrand g = [](std::span<const double> t) {
    return std::log(std::abs(1.0 + std::polar(0.5, t[0])));
  };
  const double oracle = periodic_mean(g, {1 << 16, 1});
  CHECK(std::abs(oracle) <= 1e-12);
  CHECK(std::abs(periodic_mean(g, {4096, 1}) - oracle) <= 1e-10);
}

TEST_CASE("periodic_mean is exact on random trigonometric polynomials") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> c(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 16 + 2 * trial;
    const int m = 1 + trial % 2;
    std::vector<std::array<double, 4>> modes;  // k1, k2, a, b
    const double constant = c(rng);
    for (int k = 0; k < 8; ++k) {
      std::uniform_int_distribution<int> deg(-(N / 2 - 1), N / 2 - 1);
      modes.push_back({double(deg(rng)), m == 2 ? double(deg(rng)) : 0.0, c(rng), c(rng)});
    }
    const TorusIntegrand g = [&](std::span<const double> t) {
      double s = constant;
      for (const auto& md : modes) {
        if (md[0] == 0 && md[1] == 0) continue;
        const double phase = md[0] * t[0] + (m == 2 ? md[1] * t[1] : 0.0);
        s += md[2] * std::cos(phase) + md[3] * std::sin(phase);
      }
      return s;
    };
    CHECK(std::abs(periodic_mean(g, {N, m}) - constant) <= 1e-13);
  }
}

TEST_CASE("periodic_mean perturbs singular nodes once") {
  // log|1 - e^{i theta}| is -inf at node 0; the perturbed rule still converges to 0
  const TorusIntegrand g = [](std::span<const double> t) {
    return std::log(std::abs(1.0 - std::polar(1.0, t[0])));
  };
  const auto r = periodic_mean_estimate(g, {1024, 1});
  CHECK(r.perturbed_nodes == 1);
  CHECK(std::abs(r.value) < 1e-2);
  const TorusIntegrand always_bad = [](std::span<const double>) { return -INFINITY; };
  CHECK_THROWS_AS(periodic_mean(always_bad, {8, 1}), NumericError);
}

TEST_CASE("roots_univariate examples") {
  const std::vector<cplx> z2p1{1.0, 0.0, 1.0};
  auto r = roots_univariate(z2p1);
  CHECK(hausdorff(r.roots, {cplx(0, 1), cplx(0, -1)}) < 1e-14);
  auto lin = roots_univariate(std::vector<cplx>{-2.0, 1.0});
  REQUIRE(lin.roots.size() == 1);
  CHECK(std::abs(lin.roots[0] - 2.0) < 1e-15);

  std::vector<cplx> known;
  for (int k = 1; k <= 8; ++k) known.push_back(double(k));
  auto w = roots_univariate(expand(known));
  REQUIRE(w.roots.size() == 8);
  CHECK(hausdorff(w.roots, known) <= 1e-8);
  for (double res : w.residuals) CHECK(std::isfinite(res));

  auto deficit = roots_univariate(std::vector<cplx>{3.0, 0.0, 0.0});
  CHECK(deficit.roots.empty());
  CHECK(deficit.degree_deficit == 2);
  CHECK_THROWS_AS(roots_univariate(std::vector<cplx>{0.0, 0.0}), UsageError);
}

TEST_CASE("root multiset of a product is the union") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> c(0.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> a, b;
    for (int k = deg(rng); k > 0; --k) a.push_back({c(rng), c(rng)});
    for (int k = deg(rng); k > 0; --k) b.push_back({c(rng), c(rng)});
    auto pa = expand(a), pb = expand(b);
    std::vector<cplx> prod(pa.size() + pb.size() - 1, 0.0);
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = 0; j < pb.size(); ++j) prod[i + j] += pa[i] * pb[j];
    auto ra = roots_univariate(pa).roots, rb = roots_univariate(pb).roots;
    auto rp = roots_univariate(prod).roots;
    std::vector<cplx> both(ra);
    both.insert(both.end(), rb.begin(), rb.end());
    REQUIRE(rp.size() == both.size());
    // multiset matching by greedy nearest assignment
    std::vector<bool> used(both.size(), false);
    double worst = 0.0;
    for (const auto& r : rp) {
      std::size_t best = 0;
      double d = 1e300;
      for (std::size_t k = 0; k < both.size(); ++k) {
        if (!used[k] && std::abs(r - both[k]) < d) {
          d = std::abs(r - both[k]);
          best = k;
        }
      }
      used[best] = true;
      worst = std::max(worst, d);
    }
    // near-double roots from random factors are ill-conditioned; skip those
    double sep = 1e300;
    for (std::size_t i = 0; i < both.size(); ++i)
      for (std::size_t j = i + 1; j < both.size(); ++j) sep = std::min(sep, std::abs(both[i] - both[j]));
    if (sep > 1e-3) CHECK(worst <= 1e-8);
  }
}

TEST_CASE("sylvester and eliminate examples") {
  const cplx a(1.5, 0.5), b(-0.25, 2.0);
  CHECK(std::abs(sylvester_resultant(std::vector<cplx>{-a, 1.0}, std::vector<cplx>{-b, 1.0}) - (a - b)) < 1e-14);

  // variables (u, v, w): P1 = v + (1 + u), P2 = -u v + w, w fixed
  const LaurentPolynomial p1(3, {{{0, 1, 0}, 1.0}, {{0, 0, 0}, 1.0}, {{1, 0, 0}, 1.0}});
  const LaurentPolynomial p2(3, {{{1, 1, 0}, -1.0}, {{0, 0, 1}, 1.0}});
  const cplx w(3.0, -1.0);
  const std::vector<cplx> fixed{0.0, 0.0, w};
  auto r = eliminate(p1, p2, 0, 1, fixed);
  REQUIRE(r);
  // hand-expanded 2x2 Sylvester determinant |1, 1+u; -u, w| = w + u + u^2
  const std::vector<cplx> expected{w, 1.0, 1.0};
  REQUIRE(r->coeffs.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r->coeffs[k] - expected[k]) < 1e-12);

  // Res_v(v^2 - u, v - 1) = 1 - u
  const LaurentPolynomial q1(2, {{{0, 2}, 1.0}, {{1, 0}, -1.0}});
  const LaurentPolynomial q2(2, {{{0, 1}, 1.0}, {{0, 0}, -1.0}});
  const std::vector<cplx> none{0.0, 0.0};
  auto r2 = eliminate(q1, q2, 0, 1, none);
  REQUIRE(r2);
  REQUIRE(r2->coeffs.size() == 2);
  CHECK(std::abs(r2->coeffs[0] - 1.0) < 1e-13);
  CHECK(std::abs(r2->coeffs[1] + 1.0) < 1e-13);

  // restriction independent of v in both: degenerate signal
  const LaurentPolynomial only_u(2, {{{1, 0}, 1.0}, {{0, 0}, 1.0}});
  CHECK_FALSE(eliminate(only_u, only_u, 0, 1, none).has_value());
  // common factor: resultant vanishes identically
  CHECK_FALSE(eliminate(q2, q2 * only_u, 0, 1, none).has_value());
}

TEST_CASE("eliminate roots lift to common solutions, and are complete against a grid scan") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> c(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    // bidegree (1, 2) and (2, 1) in (u, v) plus a fixed third variable
    std::vector<Term> t1, t2;
    for (int i = 0; i <= 1; ++i)
      for (int k = 0; k <= 2; ++k) t1.push_back({{i, k, (i + k) % 2}, cplx(c(rng), c(rng))});
    for (int i = 0; i <= 2; ++i)
      for (int k = 0; k <= 1; ++k) t2.push_back({{i, k, 0}, cplx(c(rng), c(rng))});
    const LaurentPolynomial p1(3, t1), p2(3, t2);
    const std::vector<cplx> fixed{0.0, 0.0, cplx(c(rng), c(rng))};
    auto res = eliminate(p1, p2, 0, 1, fixed);
    REQUIRE(res);
    auto us = roots_univariate(res->coeffs).roots;

    auto restrict_v = [&](const LaurentPolynomial& p, cplx u) {
      std::vector<cplx> vals{u, 1.0, fixed[2]};
      return univariate_restrict(p, 1, vals);
    };
    const SystemFn system = [&](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& jac) {
      const std::vector<cplx> z{x[0], x[1], fixed[2]};
      f[0] = p1(z);
      f[1] = p2(z);
      const auto d1u = partial_derivative(p1, 0), d1v = partial_derivative(p1, 1);
      const auto d2u = partial_derivative(p2, 0), d2v = partial_derivative(p2, 1);
      jac(0, 0) = d1u ? (*d1u)(z) : 0.0;
      jac(0, 1) = d1v ? (*d1v)(z) : 0.0;
      jac(1, 0) = d2u ? (*d2u)(z) : 0.0;
      jac(1, 1) = d2v ? (*d2v)(z) : 0.0;
    };
    for (const auto& u : us) {
      if (std::abs(u) < 1e-6 || std::abs(u) > 1e6) continue;
      auto r1 = restrict_v(p1, u);
      REQUIRE(r1);
      double best = 1e300;
      for (const auto& v : roots_univariate(r1->coeffs).roots) {
        if (v == cplx(0.0)) continue;
        auto polished = newton_polish(system, {u, v}, 50, 1e-10);
        best = std::min(best, polished.residual);
      }
      CHECK(best <= 1e-6);
    }

    // grid-scan oracle on |u| <= 3: local minima of min_v |P2(u, v)| over roots v of P1
    auto phi = [&](cplx u) {
      auto r1 = restrict_v(p1, u);
      double m = 1e300;
      if (!r1) return m;
      for (const auto& v : roots_univariate(r1->coeffs).roots) {
        if (v == cplx(0.0)) continue;
        const std::vector<cplx> z{u, v, fixed[2]};
        m = std::min(m, std::abs(p2(z)));
      }
      return m;
    };
    const double hstep = 0.05;
    for (double x = -3; x <= 3; x += hstep) {
      for (double y = -3; y <= 3; y += hstep) {
        const cplx u(x, y);
        const double v0 = phi(u);
        if (v0 > 0.02) continue;
        bool local_min = true;
        for (int dx = -1; dx <= 1 && local_min; ++dx)
          for (int dy = -1; dy <= 1; ++dy)
            if ((dx || dy) && phi(u + cplx(dx * hstep, dy * hstep)) < v0) local_min = false;
        if (!local_min) continue;
        double nearest = 1e300;
        for (const auto& root : us) nearest = std::min(nearest, std::abs(root - u));
        CHECK(nearest < 2 * hstep);
      }
    }
  }
}

TEST_CASE("argument_count examples") {
  const HolomorphicFn identity = [](cplx z) { return std::pair<cplx, cplx>{z, 1.0}; };
  auto a = argument_count(identity, {-0.5, 0.5, -0.5, 0.5});
  CHECK(a.count == 1);
  CHECK(a.residual < 1e-8);
  CHECK(argument_count(exp_sum_one_plus_eiz(), {0.0, 2 * pi, -1.0, 1.0}).count == 1);
  CHECK(argument_count(exp_sum_one_plus_eiz(), {0.0, 2.0, 1.0, 2.0}).count == 0);
}

TEST_CASE("argument_count is additive over a split box") {
  const HolomorphicFn f = [](cplx z) {
    // (z - 0.3)(z + 1.1 - 0.4i)(z - 2 i) e^{z}
    const cplx a = z - 0.3, b = z + cplx(1.1, -0.4), c = z - cplx(0, 2);
    const cplx e = std::exp(z);
    return std::pair<cplx, cplx>{a * b * c * e, (b * c + a * c + a * b + a * b * c) * e};
  };
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const Box whole{-2.0, 2.0, -1.0, 2.5};
    const double split = u(rng);
    const Box left{whole.x0, split, whole.y0, whole.y1}, right{split, whole.x1, whole.y0, whole.y1};
    auto l = try_argument_count(f, left), r = try_argument_count(f, right);
    if (!l || !r) continue;
    CHECK(l->count + r->count == argument_count(f, whole).count);
  }
  CHECK(argument_count(f, {-2.0, 2.0, -1.0, 2.5}).count == 3);
}

TEST_CASE("argument_count rejects a zero on the boundary after one jitter") {
  const HolomorphicFn identity = [](cplx z) { return std::pair<cplx, cplx>{z, 1.0}; };
  // zero exactly on the bottom edge: the grown box contains it
  auto r = argument_count(identity, {-1.0, 1.0, 0.0, 1.0});
  CHECK(r.jittered);
  CHECK(r.count == 1);
  ArgumentOptions no_jitter;
  no_jitter.allow_jitter = false;
  CHECK_THROWS_AS(argument_count(identity, {-1.0, 1.0, 0.0, 1.0}, no_jitter), NumericError);
}

TEST_CASE("newton_polish examples") {
  const SystemFn sq = [](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& j) {
    f[0] = x[0] * x[0] - 4.0;
    j(0, 0) = 2.0 * x[0];
  };
  auto r = newton_polish(sq, {1.8});
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 2.0) <= 1e-12);

  const SystemFn lin = [](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& j) {
    f[0] = x[0] - 2.0;
    f[1] = x[1] - 3.0;
    j(0, 0) = 1.0;
    j(0, 1) = 0.0;
    j(1, 0) = 0.0;
    j(1, 1) = 1.0;
  };
  auto r2 = newton_polish(lin, {1.0, 1.0});
  CHECK(r2.iterations == 1);
  CHECK(std::abs(r2.x[0] - 2.0) < 1e-15);
  CHECK(std::abs(r2.x[1] - 3.0) < 1e-15);

  const SystemFn pair = [](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& j) {
    f[0] = 1.0 + x[0] + x[1];
    f[1] = 1.0 + 2.0 * x[0] - x[1];
    j(0, 0) = 1.0;
    j(0, 1) = 1.0;
    j(1, 0) = 2.0;
    j(1, 1) = -1.0;
  };
  auto r3 = newton_polish(pair, {-0.6, -0.3});
  CHECK(std::abs(r3.x[0] + 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(r3.x[1] + 1.0 / 3.0) < 1e-14);

  const SystemFn singular = [](std::span<const cplx> x, std::vector<cplx>& f, CMatrix& j) {
    f[0] = x[0] * x[0] + 1.0;
    j(0, 0) = 2.0 * x[0];
  };
  auto r4 = newton_polish(singular, {0.0});
  CHECK(r4.singular);
  CHECK_FALSE(r4.converged);
}

TEST_CASE("fiber_minimize examples") {
  const auto mono = LaurentPolynomial::monomial({2, -1}, cplx(0, 3));
  const std::vector<double> y{0.4, -0.3};
  CHECK(fiber_minimize(mono, y).min_modulus == doctest::Approx(3.0 * std::exp(0.8 + 0.3)).epsilon(1e-13));

  const LaurentPolynomial line(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
  const std::vector<double> origin{0.0, 0.0};
  auto m = fiber_minimize(line, origin);
  CHECK(m.min_modulus <= 1e-8);
  const std::vector<double> far{10.0, 0.0};
  CHECK(fiber_minimize(line, far).min_modulus >= std::exp(10.0) - 2.0);
}

TEST_CASE("fiber_minimize never exceeds a probed node") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> c(0.0, 1.0);
  std::uniform_int_distribution<int> e(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Term> t;
    for (int k = 0; k < 4; ++k) t.push_back({{e(rng), e(rng)}, cplx(c(rng), c(rng))});
    const LaurentPolynomial p(2, t);
    const std::vector<double> y{0.5 * c(rng), 0.5 * c(rng)};
    FiberMinOptions opts;
    opts.coarse_nodes = 16;
    const double found = fiber_minimize(p, y, opts).min_modulus;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        const std::vector<double> th{2 * pi * i / 16, 2 * pi * j / 16};
        CHECK(found <= std::abs(p.eval_fiber(y, th)) * (1 + 1e-12));
      }
    }
  }
}
