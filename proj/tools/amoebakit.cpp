// amoebakit command line: one subcommand per pipeline, driven by a JSON
// config whose fields the flags override.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amoebakit/acceptance.hpp"
#include "amoebakit/ap_mean.hpp"
#include "amoebakit/capscan.hpp"
#include "amoebakit/components.hpp"
#include "amoebakit/error.hpp"
#include "amoebakit/output.hpp"
#include "amoebakit/parallel.hpp"
#include "amoebakit/poly_io.hpp"
#include "amoebakit/raster.hpp"
#include "amoebakit/ronkin.hpp"
#include "amoebakit/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace amoebakit;

namespace {

struct Flags {
  std::string config, out_dir, window, ladder, format, poly, sum;
  double grid_h = 0.0;
  int quad_nodes = 0, threads = 0, k = 0;
  long long seed = -1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in " + what);
  return v;
}

json parse_window(const std::string& text) {
  json w = json::array();
  for (const auto& part : split(text, ',')) {
    const auto lh = split(part, ':');
    if (lh.size() != 2) throw UsageError("--window expects lo:hi pairs separated by commas");
    w.push_back({to_real(lh[0], "--window"), to_real(lh[1], "--window")});
  }
  if (w.empty() || w.size() > 3) throw UsageError("--window needs 1 to 3 intervals");
  return w;
}

json read_json_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw UsageError("cannot read " + p.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw UsageError(p.string() + ": " + e.what());
  }
}

// Config file, then flags. Paths inside the file resolve against its directory.
struct RunConfig {
  json cfg = json::object();
  fs::path base_dir = ".";
  std::vector<LaurentPolynomial> polys;
  std::optional<ExponentialSum> sum;
  int threads = 1;
  std::uint64_t seed = 1;
  fs::path out_dir = "out";
  std::set<std::string> formats{"csv", "json", "pgm"};
  bool quad_given = false;

  int dim() const {
    if (!polys.empty()) return polys.front().dim();
    if (sum) return sum->dim();
    if (cfg.contains("window")) return static_cast<int>(cfg["window"].size());
    throw UsageError("no input: give a polynomial, an exponential sum or a window");
  }

  GridSpec grid(int n) const {
    std::vector<double> lo, hi;
    if (cfg.contains("window")) {
      const auto& w = cfg["window"];
      if (static_cast<int>(w.size()) != n) throw UsageError("window dimension does not match the input");
      for (const auto& iv : w) {
        lo.push_back(iv.at(0).get<double>());
        hi.push_back(iv.at(1).get<double>());
      }
    } else {
      lo.assign(n, -3.0);
      hi.assign(n, 3.0);
    }
    const double h = cfg.value("h", n == 1 ? 0.01 : n == 2 ? 0.05 : 0.1);
    return GridSpec(lo, hi, h);
  }

  int quad() const { return cfg.value("quad_nodes", 1024); }

  LadderSpec ladder() const {
    LadderSpec l{cfg.value("ladder", std::vector<double>{100.0, 400.0, 2000.0}), cfg.value("samples_per_unit", 8)};
    l.validate();
    return l;
  }

  bool wants(const std::string& f) const { return formats.count(f) > 0; }

  Provenance provenance() const {
    json hashed = cfg;
    for (const char* k : {"threads", "out_dir", "format"}) hashed.erase(k);
    return {config_hash(hashed), seed, kVersion};
  }

  const LaurentPolynomial& poly() const {
    if (polys.empty()) throw UsageError("this command needs a polynomial");
    return polys.front();
  }

  ExponentialSum exp_sum() const {
    if (sum) return *sum;
    if (!polys.empty()) return pullback_exponential(polys.front());
    throw UsageError("this command needs an exponential sum or a polynomial to pull back");
  }
};

LaurentPolynomial load_poly(const json& v, const fs::path& base) {
  if (v.is_string()) return laurent_from_json(read_json_file(base / v.get<std::string>()));
  return laurent_from_json(v);
}

RunConfig resolve(const Flags& f) {
  RunConfig rc;
  if (!f.config.empty()) {
    const fs::path p(f.config);
    if (!fs::exists(p)) throw UsageError("config file not found: " + f.config);
    rc.cfg = read_json_file(p);
    if (!rc.cfg.is_object()) throw UsageError("config must be a JSON object");
    rc.base_dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  }
  auto& c = rc.cfg;
  if (!f.window.empty()) c["window"] = parse_window(f.window);
  if (f.grid_h > 0.0) c["h"] = f.grid_h;
  if (f.quad_nodes > 0) c["quad_nodes"] = f.quad_nodes;
  if (!f.ladder.empty()) {
    json l = json::array();
    for (const auto& s : split(f.ladder, ',')) l.push_back(to_real(s, "--ladder"));
    c["ladder"] = l;
  }
  if (f.seed >= 0) c["seed"] = f.seed;
  if (f.threads > 0) c["threads"] = f.threads;
  if (!f.out_dir.empty()) c["out_dir"] = f.out_dir;
  if (!f.format.empty()) c["format"] = split(f.format, ',');
  if (f.k > 0) c["k"] = f.k;
  if (!f.poly.empty()) c["polynomial"] = json::parse(f.poly);
  if (!f.sum.empty()) c["exp_sum"] = json::parse(f.sum);

  rc.quad_given = c.contains("quad_nodes");
  if (c.contains("polynomial")) rc.polys.push_back(load_poly(c["polynomial"], rc.base_dir));
  if (c.contains("polynomials"))
    for (const auto& v : c["polynomials"]) rc.polys.push_back(load_poly(v, rc.base_dir));
  if (c.contains("exp_sum")) {
    const auto& v = c["exp_sum"];
    rc.sum = v.is_string() ? exponential_sum_from_json(read_json_file(rc.base_dir / v.get<std::string>()))
                           : exponential_sum_from_json(v);
  }
  rc.seed = c.value("seed", std::uint64_t{1});
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  rc.threads = c.value("threads", static_cast<int>(hw));
  if (rc.threads < 1) throw UsageError("threads must be positive");
  rc.out_dir = c.value("out_dir", std::string("out"));
  if (c.contains("format")) {
    rc.formats.clear();
    for (const auto& s : c["format"]) {
      const auto v = s.get<std::string>();
      if (v == "svg") throw UsageError("svg overlays are not available; use csv, json or pgm");
      if (v != "csv" && v != "json" && v != "pgm") throw UsageError("unknown format " + v);
      rc.formats.insert(v);
    }
  }
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  if (ec || !fs::is_directory(rc.out_dir)) throw UsageError("cannot create output directory " + rc.out_dir.string());
  set_thread_count(rc.threads);
  return rc;
}

void emit_json(const RunConfig& rc, const std::string& name, const json& j) {
  if (!rc.wants("json")) return;
  write_with_sidecar(rc.out_dir / name, [&](std::ostream& os) { write_json(os, j); }, rc.provenance());
}

void emit_region(const RunConfig& rc, const std::string& name, const GridRegion& r) {
  if (!rc.wants("pgm") || r.spec.dim() > 3) return;
  write_with_sidecar(rc.out_dir / name, [&](std::ostream& os) { write_region_pgm(os, r); }, rc.provenance(),
                     region_json(r));
}

// Raster of the input variety: one polynomial gives a hypersurface, two in
// three variables give a curve.
struct Raster {
  PointCloud cloud;
  GridRegion region;
};

Raster variety_raster(const RunConfig& rc, const GridSpec& g) {
  const json s = rc.cfg.value("sampling", json::object());
  const FiberGrid fg = FiberGrid::around(g.lo(), g.hi(), s.value("margin", 1.0), s.value("step", g.h() / 5.0),
                                         s.value("arg_nodes", 512), phase_from_seed(rc.seed));
  Raster r;
  if (rc.polys.size() == 2) {
    if (g.dim() != 3) throw UsageError("a curve needs a three-dimensional window");
    r.cloud = curve_cloud(rc.polys[0], rc.polys[1], fg);
  } else if (rc.polys.size() == 1) {
    r.cloud = amoeba_cloud(rc.polys[0], fg);
  } else {
    throw UsageError("give one polynomial or a pair of polynomials");
  }
  r.region = rasterize(r.cloud, g, rc.cfg.value("dilation_r", g.h() * std::sqrt(static_cast<double>(g.dim()))));
  return r;
}

int cmd_amoeba(const RunConfig& rc) {
  const GridSpec g = rc.grid(rc.dim());
  const Raster r = variety_raster(rc, g);
  if (rc.wants("csv"))
    write_with_sidecar(rc.out_dir / "cloud.csv", [&](std::ostream& os) { write_cloud_csv(os, r.cloud); },
                       rc.provenance(), {{"points", r.cloud.size()}, {"dimension", r.cloud.n}});
  emit_region(rc, "region.pgm", r.region);
  const auto comps = complement_components(r.region);
  json arr = json::array();
  for (const auto& c : comps) {
    json j{{"cells", c.cells.size()}, {"window_truncated", c.window_truncated}};
    if (g.dim() <= 2) j["convexity"] = to_json(convexity_check_region(g, c));
    arr.push_back(j);
  }
  emit_json(rc, "components.json",
            {{"region", region_json(r.region)}, {"points", r.cloud.size()}, {"components", arr}});
  std::printf("%zu points, %zu occupied cells, %zu complement components\n", r.cloud.size(),
              r.region.occupied_count(), comps.size());
  return 0;
}

RonkinField field_for(const RunConfig& rc, const GridSpec& g) {
  RonkinOptions opts;
  opts.refine = rc.cfg.value("refine", false);
  return ronkin_field(rc.poly(), g, {rc.quad(), g.dim()}, opts);
}

int cmd_ronkin(const RunConfig& rc) {
  const GridSpec g = rc.grid(rc.poly().dim());
  const auto f = field_for(rc, g);
  if (rc.wants("csv"))
    write_with_sidecar(rc.out_dir / "ronkin.csv", [&](std::ostream& os) { write_field_csv(os, g, f.values, &f.err_est); },
                       rc.provenance());
  if (rc.wants("pgm") && g.dim() <= 3)
    write_with_sidecar(rc.out_dir / "ronkin.pgm", [&](std::ostream& os) { write_heatmap_pgm(os, g, f.values); },
                       rc.provenance(), grid_json(g));
  const json s = summary_json(f);
  emit_json(rc, "ronkin.json", s);
  std::printf("%zu cells, max err_est %.3g\n", g.cell_count(), s["max_err_est"].get<double>());
  return 0;
}

int cmd_measure(const RunConfig& rc) {
  const GridSpec g = rc.grid(rc.poly().dim());
  const auto mass = laplacian_mass(field_for(rc, g));
  if (rc.wants("csv"))
    write_with_sidecar(rc.out_dir / "mass.csv", [&](std::ostream& os) { write_field_csv(os, g, mass.mass); },
                       rc.provenance());
  if (rc.wants("pgm") && g.dim() <= 3)
    write_with_sidecar(rc.out_dir / "mass.pgm", [&](std::ostream& os) { write_heatmap_pgm(os, g, mass.mass); },
                       rc.provenance(), grid_json(g));
  json summary = summary_json(mass);
  const Raster r = variety_raster(rc, g);
  if (!r.region.empty()) summary["support_compare"] = to_json(support_compare(mass, r.region));
  emit_json(rc, "mass.json", summary);
  std::printf("total mass %.10g\n", mass.total);
  return 0;
}

int cmd_order(const RunConfig& rc) {
  const GridSpec g = rc.grid(rc.poly().dim());
  const auto f = field_for(rc, g);
  const Raster r = variety_raster(rc, g);
  const auto fits = component_fits(f, r.region, rc.cfg.value("erosion", 2));
  json arr = json::array();
  for (const auto& fit : fits) {
    json j = to_json(fit);
    std::vector<long> order;
    for (double x : fit.gradient) order.push_back(std::lround(x));
    j["order"] = order;
    arr.push_back(j);
    std::string o;
    for (long x : order) o += (o.empty() ? "" : ",") + std::to_string(x);
    std::printf("component order (%s), residual %.3g\n", o.c_str(), fit.max_residual);
  }
  emit_json(rc, "order.json", {{"components", arr}});
  return 0;
}

int cmd_apmean(const RunConfig& rc) {
  const ExponentialSum f = rc.exp_sum();
  const GridSpec g = rc.grid(f.dim());
  const LadderSpec ladder = rc.ladder();
  std::vector<BohrMean> means(g.cell_count());
  for (std::size_t c = 0; c < g.cell_count(); ++c) means[c] = mean_log_modulus_ladder(f, g.center(c), ladder, rc.quad());
  if (rc.wants("csv"))
    write_with_sidecar(
        rc.out_dir / "apmean.csv",
        [&](std::ostream& os) {
          for (int j = 0; j < g.dim(); ++j) os << 'y' << j + 1 << ',';
          os << "estimate,extrapolated,spread\n";
          for (std::size_t c = 0; c < g.cell_count(); ++c) {
            for (double y : g.center(c)) os << format_real(y) << ',';
            os << format_real(means[c].estimate) << ',' << format_real(means[c].extrapolated) << ','
               << format_real(means[c].spread) << '\n';
          }
        },
        rc.provenance());
  json arr = json::array();
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    json j = to_json(means[c]);
    j["y"] = g.center(c);
    arr.push_back(j);
  }
  emit_json(rc, "apmean.json", {{"grid", grid_json(g)}, {"ladder", ladder.s_values}, {"means", arr}});
  if (!rc.polys.empty() && !rc.sum) {
    std::vector<std::vector<double>> ys;
    for (std::size_t c = 0; c < g.cell_count(); ++c) ys.push_back(g.center(c));
    const auto rep = pullback_consistency(rc.poly(), ys, {rc.quad(), g.dim()}, ladder);
    emit_json(rc, "pullback.json", to_json(rep));
    std::printf("pullback max deviation %.3g\n", rep.max_deviation);
  }
  std::printf("%zu means, torus rule: %s\n", means.size(), means.empty() || !means[0].torus ? "no" : "yes");
  return 0;
}

int cmd_zeros(const RunConfig& rc) {
  const ExponentialSum f = rc.exp_sum();
  const auto b = rc.cfg.value("box", std::vector<double>{-10.0, 10.0, -1.0, 1.0});
  if (b.size() != 4) throw UsageError("box must be [x0, x1, y0, y1]");
  const auto s = zeros_in_box(f, Box{b[0], b[1], b[2], b[3]});
  emit_json(rc, "zeros.json", to_json(s));
  std::printf("%d zeros with multiplicity, %zu distinct\n", s.count, s.zeros.size());
  return 0;
}

int cmd_density(const RunConfig& rc) {
  const ExponentialSum f = rc.exp_sum();
  const auto strip = rc.cfg.value("strip", std::vector<double>{-0.5, 0.5});
  if (strip.size() != 2) throw UsageError("strip must be [g0, g1]");
  const LadderSpec ladder = rc.ladder();
  const auto d = zero_density(f, strip[0], strip[1], ladder);
  json out = to_json(d);
  if (rc.cfg.contains("window")) {
    const GridSpec g = rc.grid(1);
    const auto m = slope_jump_measure(f, g, ladder, rc.quad());
    double inside = 0.0;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const double y = g.center(c)[0];
      if (y > strip[0] && y < strip[1]) inside += m.mass[c];
    }
    out["slope_jump"] = to_json(m);
    out["slope_jump_mass_in_strip"] = inside;
    if (rc.wants("csv"))
      write_with_sidecar(
          rc.out_dir / "slope_jump.csv",
          [&](std::ostream& os) {
            os << "y,mean,mass\n";
            for (std::size_t c = 0; c < g.cell_count(); ++c)
              os << format_real(g.center(c)[0]) << ',' << format_real(m.mean[c]) << ',' << format_real(m.mass[c])
                 << '\n';
          },
          rc.provenance());
    std::printf("slope-jump mass in strip %.6g\n", inside);
  }
  emit_json(rc, "density.json", out);
  std::printf("density %.6g at s = %g (extrapolated %.6g)\n", d.table.back().estimate, d.table.back().s,
              d.extrapolated);
  return 0;
}

GridRegion capscan_region(const RunConfig& rc) {
  if (rc.cfg.contains("points")) {
    const auto& pts = rc.cfg["points"];
    if (pts.empty()) throw UsageError("points must be nonempty");
    const GridSpec g = rc.grid(static_cast<int>(pts[0].size()));
    GridRegion r(g, 0.0);
    for (const auto& p : pts) {
      const auto y = p.get<std::vector<double>>();
      const auto cell = g.locate(y);
      if (!cell) throw UsageError("point outside the window");
      r.occupied[*cell] = 1;
    }
    return r;
  }
  return variety_raster(rc, rc.grid(rc.poly().dim())).region;
}

int cmd_capscan(const RunConfig& rc) {
  const GridRegion region = capscan_region(rc);
  const int k = rc.cfg.value("k", 1);
  const json s = rc.cfg.value("search", json::object());
  CapSearch search;
  search.radii = s.value("radii", std::vector<double>{});
  search.margin = s.value("margin", 0.0);
  search.eps_max = s.value("eps_max", 0.0);
  const auto rep = scan_caps(region, k, search);
  emit_region(rc, "region.pgm", region);
  emit_json(rc, "caps.json", to_json(rep));
  json conv = json::array();
  const std::size_t limit = rc.cfg.value("max_convert", std::size_t{8});
  std::size_t witnesses = 0;
  for (std::size_t i = 0; i < rep.certificates.size() && i < limit; ++i) {
    json j{{"certificate", to_json(rep.certificates[i])}};
    try {
      const auto fig = cap_to_hartogs(rep.certificates[i], region);
      const auto check = hartogs_check(region, fig);
      witnesses += check.witness();
      j["figure"] = to_json(fig);
      j["check"] = to_json(check);
    } catch (const NumericError& e) {
      j["error"] = e.what();
    }
    conv.push_back(j);
  }
  emit_json(rc, "hartogs.json", {{"converted", conv}, {"witnesses", witnesses}});
  std::printf("k = %d: %zu certificates over %zu candidates; %zu converted to witnesses\n", k,
              rep.certificates.size(), rep.candidates, witnesses);
  if (rep.certificates.empty()) std::printf("none found at this resolution and search family\n");
  return 0;
}

int cmd_verify(const RunConfig& rc) {
  AcceptanceOptions opts;
  opts.threads = rc.threads;
  opts.seed = rc.seed;
  if (rc.quad_given) opts.quad_nodes = rc.quad();
  opts.criteria = rc.cfg.value("criteria", std::vector<int>{});
  const auto rep = run_acceptance(opts);
  for (const auto& r : rep.results) std::printf("%s\n", summary_line(r).c_str());
  emit_json(rc, "verify.json", results_json(rep));
  emit_json(rc, "verify_timing.json", timing_json(rep));
  std::printf("%s\n", rep.pass() ? "verify PASS" : "verify FAIL");
  return rep.pass() ? 0 : 4;
}

int cmd_report(const RunConfig& rc) {
  std::vector<fs::path> metas;
  for (const auto& e : fs::directory_iterator(rc.out_dir)) {
    const auto name = e.path().filename().string();
    if (name.size() > 10 && name.ends_with(".meta.json") && name != "report.json.meta.json") metas.push_back(e.path());
  }
  std::sort(metas.begin(), metas.end());
  json files = json::array();
  for (const auto& m : metas) {
    const json j = read_json_file(m);
    files.push_back({{"file", j.value("file", "")},
                     {"config_hash", j.value("config_hash", "")},
                     {"seed", j.value("seed", 0)},
                     {"version", j.value("version", "")}});
    std::printf("%-24s %s seed %llu\n", j.value("file", "").c_str(), j.value("config_hash", "").c_str(),
                static_cast<unsigned long long>(j.value("seed", std::uint64_t{0})));
  }
  json out{{"files", files}};
  const fs::path verify = rc.out_dir / "verify.json";
  if (fs::exists(verify)) out["verify_pass"] = read_json_file(verify).value("pass", false);
  write_with_sidecar(rc.out_dir / "report.json", [&](std::ostream& os) { write_json(os, out); }, rc.provenance());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amoebas, Ronkin functions, mean values of exponential sums and cap scans"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--out-dir", f.out_dir, "output directory (default out)");
  app.add_option("--window", f.window, "lo1:hi1,lo2:hi2[,lo3:hi3]");
  app.add_option("--grid-h", f.grid_h, "grid cell size");
  app.add_option("--quad-nodes", f.quad_nodes, "torus quadrature nodes per axis");
  app.add_option("--ladder", f.ladder, "averaging half-widths s1,s2,...");
  app.add_option("--seed", f.seed, "sampling seed");
  app.add_option("--threads", f.threads, "worker threads");
  app.add_option("--format", f.format, "comma list of csv, json, pgm");
  app.add_option("--poly", f.poly, "inline polynomial JSON");
  app.add_option("--sum", f.sum, "inline exponential sum JSON");
  app.add_option("--k", f.k, "cap dimension for capscan");

  using Handler = int (*)(const RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands{
      {"amoeba", "sample, rasterize and decompose the complement", cmd_amoeba},
      {"ronkin", "Ronkin function on the grid", cmd_ronkin},
      {"measure", "Laplacian mass of the Ronkin function and its support", cmd_measure},
      {"order", "affine fits of the Ronkin function per complement component", cmd_order},
      {"apmean", "mean values of log|f| along the ladder", cmd_apmean},
      {"zeros", "zeros of a one-variable exponential sum in a box", cmd_zeros},
      {"density", "zero density in a strip and the slope-jump measure", cmd_density},
      {"capscan", "search supporting caps and convert them to Hartogs figures", cmd_capscan},
      {"verify", "run the acceptance criteria", cmd_verify},
      {"report", "summarise the outputs in the output directory", cmd_report},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&chosen, fn = fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    const RunConfig rc = resolve(f);
    return chosen(rc);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
