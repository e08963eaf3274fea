#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "amoebakit/ap_mean.hpp"
#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/quadrature.hpp"

using namespace amoebakit;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2 = std::log(2.0);

// 1 + e^{iz}
ExponentialSum one_plus_exp() { return ExponentialSum(1, {{{0.0}, 1.0}, {{1.0}, 1.0}}); }
// e^{-iz} - 2, the pullback of z - 2
ExponentialSum exp_minus_two() { return pullback_exponential(LaurentPolynomial(1, {{{1}, 1.0}, {{0}, -2.0}})); }

LadderSpec short_ladder() { return {{20.0, 60.0, 200.0}, 8}; }

// Mean of log|a + b e^{i theta}| over the circle.
double two_term_oracle(cplx a, cplx b) { return std::max(std::log(std::abs(a)), std::log(std::abs(b))); }

// Imaginary parts of the zeros of c0 + c1 e^{iz} + c2 e^{2iz}: w = e^{iz} solves
// the quadratic and Im z = -log|w|.
std::vector<double> quadratic_zero_heights(cplx c0, cplx c1, cplx c2) {
  const cplx disc = std::sqrt(c1 * c1 - 4.0 * c0 * c2);
  const cplx w1 = (-c1 + disc) / (2.0 * c2), w2 = (-c1 - disc) / (2.0 * c2);
  return {-std::log(std::abs(w1)), -std::log(std::abs(w2))};
}

}  // namespace

TEST_CASE("LadderSpec validation") {
  CHECK_NOTHROW(LadderSpec{{1.0, 3.0, 10.0}, 4}.validate());
  CHECK_THROWS_AS(LadderSpec({{1.0, 10.0}, 4}).validate(), UsageError);
  CHECK_THROWS_AS(LadderSpec({{1.0, 3.0, 9.0}, 4}).validate(), UsageError);
  CHECK_THROWS_AS(LadderSpec({{1.0, 5.0, 3.0, 20.0}, 4}).validate(), UsageError);
  CHECK_THROWS_AS(LadderSpec({{0.0, 5.0, 20.0}, 4}).validate(), UsageError);
  CHECK_THROWS_AS(LadderSpec({{1.0, 5.0, 20.0}, 0}).validate(), UsageError);
}

TEST_CASE("bohr_mean examples") {
  SUBCASE("constant is exact") {
    const auto r = bohr_mean([](std::span<const double>) { return 2.75; }, 2, {{1.0, 3.0, 10.0}, 4});
    CHECK(r.estimate == 2.75);
    CHECK(r.spread == 0.0);
    REQUIRE(r.table.size() == 3);
  }
  SUBCASE("cosine averages out") {
    const auto r = bohr_mean([](std::span<const double> x) { return std::cos(x[0]); }, 1, {{5.0, 20.0, 100.0}, 8});
    CHECK(std::abs(r.estimate) <= 0.02);
    CHECK(r.table.back().s == 100.0);
  }
  SUBCASE("log|1 + e^{ix}| matches its torus average") {
    const double oracle = periodic_mean(
        [](std::span<const double> t) { return std::log(std::abs(1.0 + std::polar(1.0, t[0]))); }, {4096, 1});
    const auto r = bohr_mean([](std::span<const double> x) { return std::log(std::abs(1.0 + std::polar(1.0, x[0]))); },
                             1, {{50.0, 200.0, 1000.0}, 8});
    CHECK(std::abs(r.estimate - oracle) <= 0.01);
  }
  SUBCASE("non-finite samples are reported") {
    CHECK_THROWS_AS(bohr_mean([](std::span<const double> x) { return x[0] > 3.0 ? NAN : 0.0; }, 1, short_ladder()),
                    NumericError);
  }
}

TEST_CASE("mean_log_modulus examples") {
  const LadderSpec ladder = short_ladder();
  CHECK(std::abs(mean_log_modulus(one_plus_exp(), std::vector<double>{-2.0}, ladder) - 2.0) <= 1e-3);
  CHECK(std::abs(mean_log_modulus(one_plus_exp(), std::vector<double>{1.0}, ladder)) <= 1e-3);
  const ExponentialSum g = exp_minus_two();
  for (double y = -2.0; y <= 2.0; y += 0.1) {
    CHECK(std::abs(mean_log_modulus(g, std::vector<double>{y}, ladder) - std::max(y, kLog2)) <= 1e-3);
  }
  const auto r = mean_log_modulus_ladder(g, std::vector<double>{0.3}, ladder);
  CHECK(r.torus);
}

TEST_CASE("mean_log_modulus on an incommensurable sum uses the ladder") {
  // 1 + 3 e^{i sqrt2 z}: the phase sqrt2 x equidistributes, so the mean is
  // the circle average max(0, log 3 - sqrt2 y).
  const double r2 = std::sqrt(2.0);
  const ExponentialSum f(1, {{{0.0}, 1.0}, {{r2}, 3.0}});
  CHECK_FALSE(has_integer_frequency_lattice(f));
  const LadderSpec ladder{{50.0, 200.0, 1000.0}, 8};
  for (double y : {-1.0, 0.2, 1.5}) {
    const auto r = mean_log_modulus_ladder(f, std::vector<double>{y}, ladder);
    CHECK_FALSE(r.torus);
    CHECK(std::abs(r.estimate - two_term_oracle(1.0, 3.0 * std::exp(-r2 * y))) <= 0.01);
  }
  // shifted but commensurable frequencies stay on the torus path
  CHECK(has_integer_frequency_lattice(ExponentialSum(1, {{{0.25}, 1.0}, {{2.25}, 1.0}})));
}

TEST_CASE("zeros_in_box examples") {
  SUBCASE("one simple zero at pi") {
    const auto r = zeros_in_box(one_plus_exp(), Box{0.0, 2.0 * kPi, -1.0, 1.0});
    REQUIRE(r.zeros.size() == 1);
    CHECK(r.count == 1);
    CHECK(r.zeros[0].multiplicity == 1);
    CHECK(std::abs(r.zeros[0].z - cplx(kPi, 0.0)) <= 1e-10);
  }
  SUBCASE("zero of e^{-iz} - 2 at i log 2") {
    const auto r = zeros_in_box(exp_minus_two(), Box{-kPi, kPi, 0.0, 1.0});
    REQUIRE(r.zeros.size() == 1);
    CHECK(std::abs(r.zeros[0].z - cplx(0.0, kLog2)) <= 1e-10);
  }
  SUBCASE("zero-free box") {
    const auto r = zeros_in_box(one_plus_exp(), Box{0.0, 2.0, 1.0, 2.0});
    CHECK(r.count == 0);
    CHECK(r.zeros.empty());
  }
  SUBCASE("double zero carries multiplicity 2") {
    const ExponentialSum f = one_plus_exp() * one_plus_exp();
    const auto r = zeros_in_box(f, Box{0.3, 6.0, -0.7, 0.9});
    REQUIRE(r.zeros.size() == 1);
    CHECK(r.zeros[0].multiplicity == 2);
    CHECK(std::abs(r.zeros[0].z - cplx(kPi, 0.0)) <= 1e-5);
  }
  SUBCASE("multiplicity above the cap is an error") {
    ExponentialSum f = one_plus_exp();
    for (int k = 0; k < 3; ++k) f = f * one_plus_exp();
    CHECK_THROWS_AS(zeros_in_box(f, Box{0.3, 6.0, -0.7, 0.9}), NumericError);
  }
  SUBCASE("many zeros in a wide box") {
    const auto r = zeros_in_box(one_plus_exp(), Box{-30.0, 31.0, -0.5, 0.5});
    CHECK(r.count == 10);
    REQUIRE(r.zeros.size() == 10);
    for (std::size_t i = 0; i < r.zeros.size(); ++i) {
      CHECK(std::abs(r.zeros[i].z - cplx(kPi * (2.0 * static_cast<double>(i) - 9.0), 0.0)) <= 1e-10);
    }
  }
}

TEST_CASE("zero_density examples") {
  const LadderSpec ladder = short_ladder();
  const double target = 1.0 / (2.0 * kPi);
  SUBCASE("1 + e^{iz} on (-0.5, 0.5)") {
    const auto d = zero_density(one_plus_exp(), -0.5, 0.5, ladder);
    CHECK(std::abs(d.table.back().estimate - target) <= 0.02 * target);
    for (const auto& e : d.table) CHECK(e.estimate >= 0.0);
    CHECK(d.table.back().count == 64);
    CHECK(d.zeros.size() == 64);
  }
  SUBCASE("zero-free strip gives exactly zero") {
    const auto d = zero_density(one_plus_exp(), 0.5, 1.5, ladder);
    for (const auto& e : d.table) CHECK(e.count == 0);
    CHECK(d.extrapolated == 0.0);
  }
  SUBCASE("e^{-iz} - 2 on a strip around log 2") {
    const auto d = zero_density(exp_minus_two(), 0.2, 1.2, {{100.0, 400.0, 2000.0}, 8});
    CHECK(std::abs(d.table.back().estimate - target) <= 0.02 * target);
    CHECK(std::abs(d.extrapolated - target) <= 0.02 * target);
  }
  SUBCASE("strip edge on the amoeba is rejected") {
    CHECK_THROWS_AS(zero_density(one_plus_exp(), -0.01, 0.5, ladder), DomainError);
  }
}

TEST_CASE("slope_jump_measure examples") {
  const LadderSpec ladder = short_ladder();
  const double target = 1.0 / (2.0 * kPi);
  SUBCASE("unit jump at log 2") {
    const auto m = slope_jump_measure(exp_minus_two(), GridSpec({0.0}, {1.5}, 0.05), ladder);
    CHECK(std::abs(m.total - target) <= 0.02 * target);
    CHECK(m.mass.front() == 0.0);
    CHECK(m.mass.back() == 0.0);
  }
  SUBCASE("zero-free window") {
    const auto m = slope_jump_measure(exp_minus_two(), GridSpec({2.0}, {3.0}, 0.05), ladder);
    for (double v : m.mass) CHECK(std::abs(v) <= 1e-4);
  }
  SUBCASE("product adds the factors' masses") {
    const GridSpec grid({-1.0}, {1.5}, 0.05);
    const auto a = slope_jump_measure(one_plus_exp(), grid, ladder);
    const auto b = slope_jump_measure(exp_minus_two(), grid, ladder);
    const auto ab = slope_jump_measure(one_plus_exp() * exp_minus_two(), grid, ladder);
    for (std::size_t i = 0; i < ab.mass.size(); ++i) {
      const double sum = a.mass[i] + b.mass[i];
      CHECK(std::abs(ab.mass[i] - sum) <= 0.05 * std::abs(sum) + 1e-9);
    }
    CHECK(std::abs(ab.total - 2.0 * target) <= 0.02 * target);
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS(slope_jump_measure(exp_minus_two(), GridSpec({0.0}, {0.1}, 0.05), ladder), UsageError);
  }
}

TEST_CASE("zero_amoeba marks cells near the zero heights") {
  const GridSpec grid({-1.0}, {2.0}, 0.1);
  const auto d = zero_density(exp_minus_two(), 0.2, 1.2, short_ladder());
  const GridRegion a = zero_amoeba(d.zeros, grid);
  CHECK(a.dilation_r == doctest::Approx(0.1));
  for (std::size_t i = 0; i < a.occupied.size(); ++i) {
    const double c = grid.center(0, static_cast<int>(i));
    CHECK(bool(a.occupied[i]) == (std::abs(c - kLog2) <= 0.1));
  }
}

TEST_CASE("pullback_consistency examples") {
  const LadderSpec ladder = short_ladder();
  SUBCASE("z - 2 on 20 points") {
    std::vector<std::vector<double>> ys;
    for (int k = 0; k < 20; ++k) ys.push_back({-2.0 + 4.0 * k / 19.0});
    const auto r = pullback_consistency(LaurentPolynomial(1, {{{1}, 1.0}, {{0}, -2.0}}), ys, {4096, 1}, ladder);
    CHECK(r.deviations.size() == 20);
    CHECK(r.max_deviation <= 1e-6);
  }
  SUBCASE("monomial") {
    const auto p = LaurentPolynomial::monomial({2, -1}, 3.0);
    const auto r = pullback_consistency(p, {{0.3, -1.2}, {2.0, 0.5}, {-1.0, -1.0}}, {16, 2}, ladder);
    CHECK(r.max_deviation <= 1e-12);
  }
  SUBCASE("1 + z1 + z2 on 10 points") {
    const LaurentPolynomial p(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
    std::vector<std::vector<double>> ys;
    for (int k = 0; k < 10; ++k) ys.push_back({-1.5 + 0.31 * k, 1.2 - 0.27 * k});
    const auto r = pullback_consistency(p, ys, {512, 2}, ladder);
    CHECK(r.max_deviation <= 1e-5);
  }
}

TEST_CASE("zero density agrees with the slope-jump mass") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const LadderSpec ladder{{100.0, 400.0, 2000.0}, 8};
  int checked = 0;
  for (int trial = 0; trial < 12 && checked < 4; ++trial) {
    const cplx c0(g(rng), g(rng)), c1(3.0 * g(rng), 3.0 * g(rng)), c2(g(rng), g(rng));
    const auto heights = quadratic_zero_heights(c0, c1, c2);
    const double lo = std::min(heights[0], heights[1]) - 0.6, hi = std::max(heights[0], heights[1]) + 0.6;
    const ExponentialSum f(1, {{{0.0}, c0}, {{1.0}, c1}, {{2.0}, c2}});
    // strip edges on cell boundaries, so the measure of the strip is a sum of cells
    const double h = 0.02;
    const double g0 = std::floor(lo / h) * h, g1 = std::ceil(hi / h) * h;
    const auto d = zero_density(f, g0, g1, ladder);
    const auto m = slope_jump_measure(f, GridSpec({g0 - h}, {g1 + h}, h), ladder);
    CAPTURE(trial);
    CHECK(std::abs(d.extrapolated - m.total) <= 0.02 * m.total);
    CHECK(d.table.back().count > 0);
    ++checked;
  }
  CHECK(checked == 4);
}

TEST_CASE("mean_log_modulus is convex in y") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  const LadderSpec ladder{{50.0, 200.0, 600.0}, 8};
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<ExpTerm> terms{{{0.0}, cplx(g(rng), g(rng))}, {{1.0}, cplx(g(rng), g(rng))}};
    // odd trials add an incommensurable frequency and take the ladder path
    terms.push_back({{trial % 2 ? std::sqrt(3.0) : 2.0}, cplx(g(rng), g(rng))});
    const ExponentialSum f(1, terms);
    std::vector<double> m;
    for (int k = 0; k <= 30; ++k) m.push_back(mean_log_modulus(f, std::vector<double>{-3.0 + 0.2 * k}, ladder));
    for (std::size_t k = 1; k + 1 < m.size(); ++k) {
      CAPTURE(trial);
      CAPTURE(k);
      CHECK(m[k - 1] - 2.0 * m[k] + m[k + 1] >= -1e-4);
    }
  }
}

TEST_CASE("zero count is invariant under a unimodular exponential factor") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const ExponentialSum f(1, {{{0.0}, cplx(g(rng), g(rng))}, {{1.0}, cplx(g(rng), g(rng))},
                               {{2.0}, cplx(g(rng), g(rng))}});
    const double c = u(rng);
    const double x0 = u(rng), y0 = u(rng) / 2.0;
    const Box box{x0, x0 + 1.0 + std::abs(u(rng)), y0, y0 + 0.5 + std::abs(u(rng)) / 2.0};
    try {
      const auto a = zeros_in_box(f, box);
      const auto b = zeros_in_box(f.shifted_frequency(c), box);
      CHECK(a.count == b.count);
      ++compared;
    } catch (const NumericError&) {
      // zero on the box boundary: no count to compare
    }
  }
  CHECK(compared >= 30);
}

TEST_CASE("periodic ladder entries agree across one period") {
  const ExponentialSum f(1, {{{0.0}, cplx(0.4, 1.0)}, {{1.0}, 2.0}, {{3.0}, cplx(-0.5, 0.2)}});
  const auto r = mean_log_modulus_ladder(f, std::vector<double>{0.1}, {{7.0, 7.0 + 2.0 * kPi, 80.0}, 8});
  CHECK(std::abs(r.table[0].value - r.table[1].value) <= 1e-10);
}

TEST_CASE("zero density is identical across thread counts") {
  set_thread_count(1);
  const auto a = zero_density(one_plus_exp(), -0.5, 0.5, short_ladder());
  set_thread_count(4);
  const auto b = zero_density(one_plus_exp(), -0.5, 0.5, short_ladder());
  set_thread_count(1);
  REQUIRE(a.zeros.size() == b.zeros.size());
  for (std::size_t i = 0; i < a.zeros.size(); ++i) CHECK(a.zeros[i].z == b.zeros[i].z);
  CHECK(a.extrapolated == b.extrapolated);
}
