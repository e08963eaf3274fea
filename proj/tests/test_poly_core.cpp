#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "amoebakit/error.hpp"
#include "amoebakit/exponential_sum.hpp"
#include "amoebakit/laurent.hpp"
#include "amoebakit/newton_polytope.hpp"
#include "amoebakit/poly_io.hpp"

using namespace amoebakit;
using std::numbers::pi;

namespace {

LaurentPolynomial line() {  // 1 + z1 + z2
  return LaurentPolynomial(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
}

LaurentPolynomial random_poly(std::mt19937_64& rng, int n, int terms, int range) {
  std::uniform_int_distribution<int> e(-range, range);
  std::normal_distribution<double> c(0.0, 1.0);
  std::vector<Term> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<int> ex(static_cast<std::size_t>(n));
    for (auto& v : ex) v = e(rng);
    t.push_back({ex, cplx(c(rng), c(rng))});
  }
  return LaurentPolynomial(n, t);
}

// Oracle: a point is extreme iff it lies in no triangle or segment spanned
// by the other points (exact integer orientation tests).
long long orient(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& c) {
  return static_cast<long long>(b[0] - a[0]) * (c[1] - a[1]) - static_cast<long long>(b[1] - a[1]) * (c[0] - a[0]);
}
bool on_segment(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& p) {
  return orient(a, b, p) == 0 && std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}
bool in_triangle(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& c,
                 const std::vector<int>& p) {
  const long long d1 = orient(a, b, p), d2 = orient(b, c, p), d3 = orient(c, a, p);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0, pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}
std::vector<std::vector<int>> brute_force_hull(std::vector<std::vector<int>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool inside = false;
    for (std::size_t a = 0; a < pts.size() && !inside; ++a) {
      for (std::size_t b = a + 1; b < pts.size() && !inside; ++b) {
        if (a == i || b == i) continue;
        if (on_segment(pts[a], pts[b], pts[i])) inside = true;
        for (std::size_t c = b + 1; c < pts.size() && !inside; ++c) {
          if (c == i) continue;
          if (orient(pts[a], pts[b], pts[c]) != 0 && in_triangle(pts[a], pts[b], pts[c], pts[i])) inside = true;
        }
      }
    }
    if (!inside) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("construction canonicalizes and rejects the zero polynomial") {
  LaurentPolynomial p(2, {{{1, 0}, 2.0}, {{0, 0}, 1.0}, {{1, 0}, -1.0}, {{0, 1}, 0.0}});
  REQUIRE(p.size() == 2);
  CHECK(p.terms()[0].exponent == std::vector<int>{0, 0});
  CHECK(p.terms()[1].coef == cplx(1.0));
  CHECK_THROWS_AS(LaurentPolynomial(1, {{{1}, 1.0}, {{1}, -1.0}}), DegenerateError);
  CHECK_THROWS_AS(LaurentPolynomial(2, {{{1}, 1.0}}), UsageError);
}

TEST_CASE("eval") {
  const auto p = line();
  const std::vector<cplx> ones{1.0, 1.0};
  CHECK(std::abs(p(ones) - cplx(3.0)) < 1e-15);
  const std::vector<cplx> w{std::polar(1.0, 2 * pi / 3), std::polar(1.0, -2 * pi / 3)};
  CHECK(std::abs(p(w)) < 1e-15);
  const auto mono = LaurentPolynomial::monomial({2, -1}, 3.0);
  const std::vector<cplx> z{2.0, 4.0};
  CHECK(std::abs(mono(z) - cplx(3.0)) < 1e-15);
  const std::vector<cplx> bad{0.0, 1.0};
  CHECK_THROWS_AS(p(bad), DomainError);
}

TEST_CASE("eval_fiber") {
  const LaurentPolynomial zm2(1, {{{1}, 1.0}, {{0}, -2.0}});
  const std::vector<double> y{std::log(2.0)}, th{0.0};
  CHECK(std::abs(zm2.eval_fiber(y, th)) < 1e-15);
  const std::vector<double> y0{0.0, 0.0}, t0{2 * pi / 3, -2 * pi / 3};
  CHECK(std::abs(line().eval_fiber(y0, t0)) < 1e-15);
  const auto mono = LaurentPolynomial::monomial({2, -1}, 3.0);
  const std::vector<double> t1{pi / 2, 0.0};
  CHECK(std::abs(mono.eval_fiber(y0, t1) - cplx(-3.0)) < 1e-14);
}

TEST_CASE("eval_fiber is 2 pi periodic in every angle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_poly(rng, 2, 5, 3);
    std::vector<double> y{u(rng), u(rng)}, th{3 * u(rng), 3 * u(rng)};
    const cplx v = p.eval_fiber(y, th);
    for (int j = 0; j < 2; ++j) {
      auto shifted = th;
      shifted[j] += 2 * pi;
      CHECK(std::abs(p.eval_fiber(y, shifted) - v) <= 1e-12 * (1.0 + std::abs(v)));
    }
  }
}

TEST_CASE("product law for evaluation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 1.5), a(-pi, pi);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_poly(rng, 2, 4, 2);
    const auto q = random_poly(rng, 2, 3, 2);
    const std::vector<cplx> z{std::polar(u(rng), a(rng)), std::polar(u(rng), a(rng))};
    const cplx lhs = (p * q)(z), rhs = p(z) * q(z);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + 1e-14);
  }
}

TEST_CASE("newton_polytope") {
  CHECK(newton_polytope(line()).vertices == std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}});
  CHECK(newton_polytope(LaurentPolynomial::monomial({2, -1}, 3.0)).vertices ==
        std::vector<std::vector<int>>{{2, -1}});
  const LaurentPolynomial q(2, {{{0, 0}, 1.0}, {{2, 1}, 1.0}, {{1, 2}, 1.0}, {{1, 1}, 1.0}});
  const auto expected = brute_force_hull({{0, 0}, {2, 1}, {1, 2}, {1, 1}});
  CHECK(expected == std::vector<std::vector<int>>{{0, 0}, {1, 2}, {2, 1}});
  CHECK(newton_polytope(q).vertices == expected);
}

TEST_CASE("newton_polytope agrees with brute force on random point sets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_poly(rng, 2, 3 + trial % 8, 3);
    std::vector<std::vector<int>> pts;
    for (const auto& t : p.terms()) pts.push_back(t.exponent);
    CHECK(newton_polytope(p).vertices == brute_force_hull(pts));
  }
}

TEST_CASE("newton_polytope of a product is the Minkowski sum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    const auto p = random_poly(rng, n, 4, 2);
    const auto q = random_poly(rng, n, 3, 2);
    std::vector<std::vector<int>> sums;
    for (const auto& a : newton_polytope(p).vertices) {
      for (const auto& b : newton_polytope(q).vertices) {
        std::vector<int> s(a);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += b[j];
        sums.push_back(s);
      }
    }
    CHECK(newton_polytope(p * q).vertices == extreme_points(sums));
    if (n == 2) CHECK(extreme_points(sums) == brute_force_hull(sums));
  }
}

TEST_CASE("extreme points in 3D drop interior and edge points") {
  auto v = extreme_points({{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
  CHECK(v == std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 2}, {0, 2, 0}, {2, 0, 0}});
}

TEST_CASE("pullback_exponential") {
  const LaurentPolynomial zm2(1, {{{1}, 1.0}, {{0}, -2.0}});
  const auto f = pullback_exponential(zm2);
  REQUIRE(f.terms().size() == 2);
  CHECK(f.terms()[0].frequency == std::vector<double>{-1.0});
  CHECK(f.terms()[0].coef == cplx(1.0));
  CHECK(f.terms()[1].frequency == std::vector<double>{0.0});
  CHECK(f.terms()[1].coef == cplx(-2.0));

  const auto g = pullback_exponential(line());
  std::vector<std::vector<double>> freqs;
  for (const auto& t : g.terms()) {
    freqs.push_back(t.frequency);
    CHECK(t.coef == cplx(1.0));
  }
  CHECK(freqs == std::vector<std::vector<double>>{{-1, 0}, {0, -1}, {0, 0}});

  const auto m = pullback_exponential(LaurentPolynomial::monomial({2, -1}, 3.0));
  REQUIRE(m.terms().size() == 1);
  CHECK(m.terms()[0].frequency == std::vector<double>{-2.0, 1.0});
  CHECK(m.terms()[0].coef == cplx(3.0));
}

TEST_CASE("pullback modulus matches the fiber value at (Im z, -Re z)") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_poly(rng, 2, 4, 2);
    const auto f = pullback_exponential(p);
    const std::vector<cplx> z{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const std::vector<double> y{z[0].imag(), z[1].imag()}, th{-z[0].real(), -z[1].real()};
    const double lhs = std::abs(f(z)), rhs = std::abs(p.eval_fiber(y, th));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs + 1e-14);
  }
}

TEST_CASE("partial_derivative") {
  auto d = partial_derivative(line(), 0);
  REQUIRE(d);
  CHECK(*d == LaurentPolynomial::constant(2, 1.0));
  auto d2 = partial_derivative(LaurentPolynomial::monomial({2, 1}, 1.0), 0);
  REQUIRE(d2);
  CHECK(*d2 == LaurentPolynomial::monomial({1, 1}, 2.0));
  const LaurentPolynomial one_plus_z2(2, {{{0, 0}, 1.0}, {{0, 1}, 1.0}});
  CHECK_FALSE(partial_derivative(one_plus_z2, 0).has_value());
}

TEST_CASE("univariate_restrict") {
  const std::vector<cplx> fix{0.0, 1.0};
  auto r = univariate_restrict(line(), 0, fix);
  REQUIRE(r);
  CHECK(r->shift == 0);
  CHECK(r->coeffs == std::vector<cplx>{2.0, 1.0});

  const LaurentPolynomial q(2, {{{1, 1}, 1.0}, {{-1, 0}, 1.0}});
  const std::vector<cplx> fix2{0.0, 2.0};
  auto r2 = univariate_restrict(q, 0, fix2);
  REQUIRE(r2);
  CHECK(r2->shift == -1);
  CHECK(r2->coeffs == std::vector<cplx>{1.0, 0.0, 2.0});

  const LaurentPolynomial z2m1(2, {{{0, 1}, 1.0}, {{0, 0}, -1.0}});
  CHECK_FALSE(univariate_restrict(z2m1, 0, fix).has_value());
}

TEST_CASE("JSON round trip and labelled errors") {
  const auto p = parse_laurent(R"({"n": 2, "terms": [{"e": [0,0], "c": [1,0]}, {"e": [1,0], "c": 1}, {"e": [0,1], "c": [1, 0]}]})");
  CHECK(p == line());
  CHECK(laurent_from_json(to_json(p)) == p);
  const auto f = parse_exponential_sum(R"({"n": 1, "terms": [{"f": [1.5], "c": [1, 2]}]})");
  CHECK(f.terms()[0].frequency[0] == 1.5);
  CHECK(exponential_sum_from_json(to_json(f)).terms()[0].coef == cplx(1, 2));

  auto message = [](const std::string& text) {
    try {
      parse_laurent(text);
    } catch (const UsageError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"n": 2, "terms": [{"e": [0,0], "c": [1,0]}, {"e": [1], "c": [1,0]}]})").find("$.terms[1].e") !=
        std::string::npos);
  CHECK(message(R"({"n": 1, "terms": [{"e": [0.5], "c": [1,0]}]})").find("$.terms[0].e[0]") != std::string::npos);
  CHECK(message(R"({"n": 1, "terms": [{"e": [1]}]})").find("$.terms[0].c") != std::string::npos);
  CHECK(message(R"({"n": 1, "terms": [)").find("byte") != std::string::npos);
}
