#include "amoebakit/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "amoebakit/ap_mean.hpp"
#include "amoebakit/capscan.hpp"
#include "amoebakit/components.hpp"
#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/raster.hpp"
#include "amoebakit/ronkin.hpp"
#include "amoebakit/sampling.hpp"

namespace amoebakit {

bool CriterionResult::checks_pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

bool AcceptanceReport::pass() const {
  return !results.empty() && std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
}

namespace {

constexpr double kPi = std::numbers::pi;

LaurentPolynomial line() { return LaurentPolynomial(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}}); }
LaurentPolynomial z_minus_2() { return LaurentPolynomial(1, {{{1}, 1.0}, {{0}, -2.0}}); }

struct Recorder {
  CriterionResult& r;
  void at_most(const std::string& name, double value, double limit) {
    r.checks.push_back({name, value, limit, value <= limit});
  }
  void at_least(const std::string& name, double value, double limit) {
    r.checks.push_back({name, value, limit, value >= limit});
  }
  void equals(const std::string& name, double value, double expected) {
    r.checks.push_back({name, value, expected, value == expected});
  }
};

int quad(const AcceptanceOptions& o, int fallback) { return o.quad_nodes > 0 ? o.quad_nodes : fallback; }

// Mahler measure of 1 + x + y: (3 sqrt 3 / (4 pi)) L(chi_{-3}, 2).
double line_mahler_measure() {
  double l = 0.0;
  for (long k = 400000; k >= 0; --k)
    l += 1.0 / ((3.0 * k + 1) * (3.0 * k + 1)) - 1.0 / ((3.0 * k + 2) * (3.0 * k + 2));
  return 3.0 * std::sqrt(3.0) / (4.0 * kPi) * l;
}

void monomial_exactness(Recorder& rec, const AcceptanceOptions& o) {
  const auto p = LaurentPolynomial::monomial({2, -1}, 3.0);
  const GridSpec g({-2.0, -2.0}, {2.0, 2.0}, 0.08);  // 50 x 50
  const auto field = ronkin_field(p, g, {quad(o, 16), 2});
  double dev = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto y = g.center(c);
    dev = std::max(dev, std::abs(field.values[c] - (std::log(3.0) + 2 * y[0] - y[1])));
  }
  rec.equals("grid cells", static_cast<double>(g.cell_count()), 2500);
  rec.at_most("max |N_P - affine|", dev, 1e-12);
  const auto cloud = amoeba_cloud(p, FiberGrid::around(g.lo(), g.hi(), 1.0, 0.01, 256, phase_from_seed(o.seed)));
  rec.equals("raster occupied cells", static_cast<double>(rasterize(cloud, g, 0.08 * std::sqrt(2.0)).occupied_count()),
             0);
  rec.at_most("|laplacian mass total|", std::abs(laplacian_mass(field).total), 1e-10);
}

void jensen_oracle(Recorder& rec, const AcceptanceOptions& o) {
  const GridSpec g({-2.0}, {2.0}, 0.01);
  const auto field = ronkin_field(z_minus_2(), g, {quad(o, 4096), 1});
  const double l2 = std::log(2.0);
  double dev = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const double y = g.center(c)[0];
    if (std::abs(y - l2) >= 0.05) dev = std::max(dev, std::abs(field.values[c] - std::max(y, l2)));
  }
  rec.at_most("max |N_P - max(y, log 2)| away from log 2", dev, 1e-6);
  const auto mass = laplacian_mass(field);
  rec.at_most("|mass total - 1|", std::abs(mass.total - 1.0), 1e-3);
  double far = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    if (std::abs(g.center(c)[0] - l2) > 3 * g.h()) far += std::abs(mass.mass[c]);
  rec.at_most("|mass| beyond 3 cells of log 2", far, 1e-9);
}

void three_tentacles(Recorder& rec, const AcceptanceOptions& o) {
  const GridSpec g = symmetric_grid(2, 3.0, 0.05);
  const auto region = rasterize(
      amoeba_cloud(line(), FiberGrid::around(g.lo(), g.hi(), 1.0, 0.01, 1024, phase_from_seed(o.seed))), g,
      g.h() * std::sqrt(2.0));
  const auto comps = complement_components(region);
  rec.equals("complement components", static_cast<double>(comps.size()), 3);
  std::size_t violations = 0;
  for (const auto& c : comps) violations += convexity_check_region(g, c).violation_count;
  rec.equals("convexity violations", static_cast<double>(violations), 0);

  const auto field = ronkin_field(line(), g, {quad(o, 1024), 2});
  const auto fits = component_fits(field, region);
  const std::vector<std::vector<double>> expected{{0, 0}, {1, 0}, {0, 1}};
  std::vector<int> matched(expected.size(), 0);
  double worst = fits.size() == expected.size() ? 0.0 : 1.0;
  for (const auto& f : fits) {
    if (f.cells_used == 0 || f.gradient.size() != 2) {
      worst = std::max(worst, 1.0);
      continue;
    }
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t e = 0; e < expected.size(); ++e) {
      const double d = std::max(std::abs(f.gradient[0] - expected[e][0]), std::abs(f.gradient[1] - expected[e][1]));
      if (d < bd) bd = d, best = e;
    }
    ++matched[best];
    worst = std::max(worst, bd);
  }
  rec.equals("distinct gradients matched", static_cast<double>(std::count(matched.begin(), matched.end(), 1)), 3);
  rec.at_most("max gradient deviation", worst, 1e-3);

  const std::vector<double> origin{0.0, 0.0};
  const double n12 = ronkin_value(line(), origin, {4096, 2});
  const double n13 = ronkin_value(line(), origin, {8192, 2});
  rec.at_most("|N(0,0) at 2^12 - at 2^13|", std::abs(n12 - n13), 1e-5);
  rec.at_most("|N(0,0) at 2^13 - Mahler measure|", std::abs(n13 - line_mahler_measure()), 1e-5);

  const auto support = support_compare(laplacian_mass(field), region);
  rec.at_most("outside mass fraction", support.outside_mass_fraction, 1e-2);
  rec.at_most("uncovered amoeba cell fraction",
              static_cast<double>(support.uncovered_amoeba_cells) / std::max<std::size_t>(1, support.amoeba_cells),
              1e-2);
}

void convexity(Recorder& rec, const AcceptanceOptions& o) {
  const LaurentPolynomial q(2, {{{1, 0}, 1.0}, {{0, 0}, -2.0}});
  const auto f1 = ronkin_field(z_minus_2(), GridSpec({-2.0}, {2.0}, 0.01), {quad(o, 4096), 1});
  const auto s1 = convexity_sweep(f1);
  rec.equals("violations z - 2", static_cast<double>(s1.violations), 0);
  const GridSpec g = symmetric_grid(2, 3.0, 0.05);
  const QuadratureSpec qs{quad(o, 1024), 2};
  const auto fp = ronkin_field(line(), g, qs);
  const auto fq = ronkin_field(q, g, qs);
  const auto fpq = ronkin_field(line() * q, g, qs);
  rec.equals("violations 1 + z1 + z2", static_cast<double>(convexity_sweep(fp).violations), 0);
  rec.equals("violations (1 + z1 + z2)(z1 - 2)", static_cast<double>(convexity_sweep(fpq).violations), 0);
  double dev = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    dev = std::max(dev, std::abs(fpq.values[c] - fp.values[c] - fq.values[c]));
  rec.at_most("max |N_PQ - N_P - N_Q|", dev, 1e-8);
}

void zero_density_check(Recorder& rec, const AcceptanceOptions&) {
  const ExponentialSum f(1, {{{0.0}, 1.0}, {{1.0}, 1.0}});
  const LadderSpec ladder{{100.0, 400.0, 2000.0}, 8};
  const double target = 1.0 / (2.0 * kPi);
  const auto in = zero_density(f, -0.5, 0.5, ladder);
  rec.at_most("relative density error at s = 2000", std::abs(in.table.back().estimate - target) / target, 0.02);
  const auto out = zero_density(f, 0.5, 1.5, ladder);
  long found = 0;
  for (const auto& e : out.table) found += e.count;
  rec.equals("zeros in (0.5, 1.5)", static_cast<double>(found), 0);
  const auto m = slope_jump_measure(f, GridSpec({-0.5}, {0.5}, 0.05), ladder);
  rec.at_most("relative slope-jump mass vs density", std::abs(m.total - in.table.back().estimate) / target, 0.02);
}

void pullback(Recorder& rec, const AcceptanceOptions& o) {
  const LadderSpec ladder{{20.0, 60.0, 200.0}, 8};
  std::vector<std::vector<double>> y1;
  const GridSpec g1({-2.0}, {2.0}, 0.2);
  for (std::size_t c = 0; c < g1.cell_count(); ++c) y1.push_back(g1.center(c));
  std::vector<std::vector<double>> y2;
  const GridSpec g2({-2.0, -1.6}, {2.0, 1.6}, 0.8);  // 5 x 4
  for (std::size_t c = 0; c < g2.cell_count(); ++c) y2.push_back(g2.center(c));
  const QuadratureSpec q1{quad(o, 1024), 1}, q2{quad(o, 1024), 2};
  rec.equals("points", static_cast<double>(y1.size() + y2.size()), 40);
  rec.at_most("max deviation z - 2", pullback_consistency(z_minus_2(), y1, q1, ladder).max_deviation, 1e-5);
  rec.at_most("max deviation 1 + z1 + z2", pullback_consistency(line(), y2, q2, ladder).max_deviation, 1e-5);
}

void cap_scanner(Recorder& rec, const AcceptanceOptions& o) {
  const GridSpec g2 = symmetric_grid(2, 1.0, 0.1);
  GridRegion pt(g2, 0.0);
  pt.occupied[g2.ravel(std::vector<int>{10, 10})] = 1;
  const auto k1 = scan_caps(pt, 1);
  rec.at_least("point: k = 1 certificates", static_cast<double>(k1.certificates.size()), 1);
  std::size_t unverified = 0;
  for (const auto& c : k1.certificates) unverified += !verify_cap(pt, c).pass;
  rec.equals("point: certificates failing verify_cap", static_cast<double>(unverified), 0);
  bool witness = false;
  if (!k1.certificates.empty()) witness = hartogs_check(pt, cap_to_hartogs(k1.certificates.front(), pt)).witness();
  rec.equals("point: converted figure is a witness", witness ? 1 : 0, 1);
  rec.equals("point: k = 2 certificates", static_cast<double>(scan_caps(pt, 2).certificates.size()), 0);

  const double phase = phase_from_seed(o.seed);
  const GridSpec g = symmetric_grid(2, 3.0, 0.05);
  const auto line_region =
      rasterize(amoeba_cloud(line(), FiberGrid::around(g.lo(), g.hi(), 1.0, 0.01, 1024, phase)), g,
                g.h() * std::sqrt(2.0));
  rec.equals("1 + z1 + z2: k = 1 certificates", static_cast<double>(scan_caps(line_region, 1).certificates.size()),
             0);

  const GridSpec g3 = symmetric_grid(3, 3.0, 0.1);
  const LaurentPolynomial p1(3, {{{0, 0, 0}, 1.0}, {{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}});
  const LaurentPolynomial p2(3, {{{0, 0, 0}, 1.0}, {{1, 0, 0}, 1.0}, {{0, 0, 1}, 1.0}});
  const auto curve = rasterize(curve_cloud(p1, p2, FiberGrid::around(g3.lo(), g3.hi(), 1.0, 0.02, 256, phase)), g3,
                               g3.h() * std::sqrt(3.0));
  rec.at_least("curve raster occupied cells", static_cast<double>(curve.occupied_count()), 1);
  rec.equals("curve: k = 2 certificates", static_cast<double>(scan_caps(curve, 2).certificates.size()), 0);
}

struct Spec {
  const char* title;
  double budget;
  void (*run)(Recorder&, const AcceptanceOptions&);
};

const Spec kCriteria[] = {
    {"monomial exactness", 5, monomial_exactness},
    {"Jensen oracle", 10, jensen_oracle},
    {"three-tentacle amoeba", 300, three_tentacles},
    {"convexity sweep", 300, convexity},
    {"zero density", 120, zero_density_check},
    {"pullback identity", 120, pullback},
    {"cap scanner", 600, cap_scanner},
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<CriterionResult> run_base(const std::vector<int>& ids, const AcceptanceOptions& o) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, o));
  return out;
}

nlohmann::json criterion_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
  nlohmann::json j{{"id", r.id}, {"title", r.title}, {"checks", checks}, {"pass", r.checks_pass()}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > 7) throw UsageError("criterion must lie in 1..7");
  const Spec& s = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = s.title;
  r.budget = s.budget;
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec{r};
  try {
    s.run(rec, opts);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = since(t0);
  return r;
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
  std::vector<int> ids = opts.criteria;
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> base;
  bool determinism = false;
  for (int id : ids) {
    if (id == 8) determinism = true;
    else if (id >= 1 && id <= 7) base.push_back(id);
    else throw UsageError("criterion must lie in 1..8");
  }
  const int saved = thread_count();
  AcceptanceReport rep;
  set_thread_count(opts.threads);
  rep.results = run_base(base, opts);

  if (determinism) {
    CriterionResult r;
    r.id = 8;
    r.title = "determinism";
    r.budget = 60;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> all{1, 2, 3, 4, 5, 6, 7};
    // Reuse the main run when it covered 1..7 at one of the two counts.
    const bool reuse = base == all && (opts.threads == 1 || opts.threads == 4);
    AcceptanceReport a, b;
    if (reuse) {
      a.results = rep.results;
      set_thread_count(opts.threads == 1 ? 4 : 1);
      b.results = run_base(all, opts);
    } else {
      set_thread_count(1);
      a.results = run_base(all, opts);
      set_thread_count(4);
      b.results = run_base(all, opts);
    }
    const std::string da = results_json(a).dump(), db = results_json(b).dump();
    r.checks.push_back({"timing-free JSON identical for 1 and 4 threads", da == db ? 1.0 : 0.0, 1.0, da == db});
    r.checks.push_back({"bytes compared", static_cast<double>(da.size()), 1.0, da.size() > 0});
    r.seconds = since(t0);
    rep.results.push_back(r);
  }
  set_thread_count(saved);
  return rep;
}

nlohmann::json results_json(const AcceptanceReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = !report.results.empty();
  for (const auto& r : report.results) {
    arr.push_back(criterion_json(r));
    all = all && r.checks_pass();
  }
  return {{"criteria", arr}, {"pass", all}};
}

nlohmann::json timing_json(const AcceptanceReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : report.results)
    arr.push_back({{"id", r.id}, {"seconds", r.seconds}, {"budget", r.budget}, {"within_budget", r.within_budget()}});
  return {{"criteria", arr}, {"pass", report.pass()}};
}

std::string summary_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s of %.0f s)", r.seconds, r.budget);
  std::string line = "criterion " + std::to_string(r.id) + (r.pass() ? " PASS " : " FAIL ") + r.title + buf;
  if (!r.error.empty()) line += ": " + r.error;
  for (const auto& c : r.checks)
    if (!c.pass) line += "; failed " + c.name;
  if (!r.within_budget()) line += "; over budget";
  return line;
}

}  // namespace amoebakit
