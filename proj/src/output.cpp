#include "amoebakit/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>

#include "amoebakit/error.hpp"

namespace amoebakit {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (int j = 0; j < cloud.n; ++j) {
      if (j) os << ',';
      os << format_real(p[j]);
    }
    os << '\n';
  }
}

void write_field_csv(std::ostream& os, const GridSpec& spec, const std::vector<double>& values,
                     const std::vector<double>* err_est) {
  if (values.size() != spec.cell_count()) throw UsageError("field length does not match the grid");
  if (err_est && err_est->size() != values.size()) throw UsageError("error estimate length does not match the grid");
  for (int j = 0; j < spec.dim(); ++j) os << 'y' << j + 1 << ',';
  os << "value" << (err_est ? ",err_est" : "") << '\n';
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    for (double y : spec.center(c)) os << format_real(y) << ',';
    os << format_real(values[c]);
    if (err_est) os << ',' << format_real((*err_est)[c]);
    os << '\n';
  }
}

namespace {

// Image rows: axis 1 descending inside each slice, slices by ascending axis 2.
struct Layout {
  int width = 1, rows = 1, slices = 1;
};

Layout layout(const GridSpec& spec) {
  const int n = spec.dim();
  if (n < 1 || n > 3) throw UsageError("PGM export supports 1 to 3 dimensions");
  Layout l;
  l.width = spec.counts()[0];
  if (n >= 2) l.rows = spec.counts()[1];
  if (n == 3) l.slices = spec.counts()[2];
  return l;
}

std::size_t cell_at(const GridSpec& spec, const Layout& l, int slice, int row, int col) {
  std::vector<int> idx{col};
  if (spec.dim() >= 2) idx.push_back(l.rows - 1 - row);
  if (spec.dim() == 3) idx.push_back(slice);
  return spec.ravel(idx);
}

void write_pgm(std::ostream& os, const GridSpec& spec, const std::function<unsigned char(std::size_t)>& pixel) {
  const Layout l = layout(spec);
  os << "P5\n" << l.width << ' ' << l.rows * l.slices << "\n255\n";
  std::string line(l.width, '\0');
  for (int s = 0; s < l.slices; ++s)
    for (int r = 0; r < l.rows; ++r) {
      for (int c = 0; c < l.width; ++c) line[c] = static_cast<char>(pixel(cell_at(spec, l, s, r, c)));
      os.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

}  // namespace

void write_region_pgm(std::ostream& os, const GridRegion& region) {
  write_pgm(os, region.spec, [&](std::size_t c) { return region.occupied[c] ? 255 : 0; });
}

void write_heatmap_pgm(std::ostream& os, const GridSpec& spec, const std::vector<double>& values) {
  if (values.size() != spec.cell_count()) throw UsageError("field length does not match the grid");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double span = hi > lo ? hi - lo : 1.0;
  write_pgm(os, spec, [&](std::size_t c) -> unsigned char {
    const double v = values[c];
    if (!std::isfinite(v) || !(hi >= lo)) return 0;
    return static_cast<unsigned char>(std::lround(255.0 * (v - lo) / span));
  });
}

GridRegion read_region_pgm(std::istream& is, const GridSpec& spec, double dilation_r) {
  const Layout l = layout(spec);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (!is || magic != "P5" || maxval != 255) throw UsageError("not an 8-bit P5 image");
  if (w != l.width || h != l.rows * l.slices) throw UsageError("image size does not match the grid");
  is.get();
  GridRegion region(spec, dilation_r);
  std::string line(w, '\0');
  for (int s = 0; s < l.slices; ++s)
    for (int r = 0; r < l.rows; ++r) {
      if (!is.read(line.data(), w)) throw UsageError("truncated PGM image");
      for (int c = 0; c < w; ++c) region.occupied[cell_at(spec, l, s, r, c)] = line[c] != 0;
    }
  return region;
}

json grid_json(const GridSpec& spec) {
  json window = json::array();
  for (int j = 0; j < spec.dim(); ++j) window.push_back({spec.lo()[j], spec.hi()[j]});
  return {{"window", window}, {"h", spec.h()}, {"counts", spec.counts()}};
}

json region_json(const GridRegion& region) {
  json j = grid_json(region.spec);
  j["dilation_r"] = region.dilation_r;
  j["occupied"] = region.occupied_count();
  return j;
}

json to_json(const CapCertificate& c) {
  return {{"k", c.k},           {"frame", c.frame},         {"plane_axes", c.plane_axes()},
          {"base", c.base},     {"radius", c.radius},       {"margin", c.margin},
          {"direction", c.direction}, {"eps_max", c.eps_max}};
}

json to_json(const CapVerification& v) {
  return {{"pass", v.pass},
          {"nonempty", v.nonempty},
          {"compact", v.compact},
          {"translates_clear", v.translates_clear},
          {"failures", v.failures}};
}

json to_json(const CapScanReport& r) {
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  return {{"k", r.k},
          {"search",
           {{"radii", r.radii},
            {"margin", r.margin},
            {"eps_max", r.eps_max},
            {"slab", r.slab},
            {"offset_step", r.offset_step},
            {"axis_aligned", true}}},
          {"planes", r.planes},
          {"candidates", r.candidates},
          {"skipped_overflow", r.skipped_overflow},
          {"certificates", certs},
          {"result", r.certificates.empty() ? "none found at this resolution and search family" : "caps found"}};
}

json to_json(const HartogsFigure& f) {
  return {{"q", f.q},           {"alpha", f.alpha},   {"beta", f.beta},     {"z_axes", f.z_axes},
          {"w_axes", f.w_axes}, {"base", f.base},     {"z_half", f.z_half}, {"w_half", f.w_half},
          {"shift", f.shift},   {"center", f.center()}};
}

json to_json(const HartogsResult& r) {
  return {{"figure_clear", r.figure_clear}, {"hull_meets", r.hull_meets}, {"witness", r.witness()}};
}

json to_json(const HartogsScanReport& r) {
  json w = json::array();
  for (const auto& f : r.witnesses) w.push_back(to_json(f));
  return {{"q", r.q}, {"figures", r.figures}, {"skipped_overflow", r.skipped_overflow}, {"witnesses", w}};
}

namespace {

json zeros_json(const std::vector<LocatedZero>& zeros) {
  json a = json::array();
  for (const auto& z : zeros) a.push_back({{"z", {z.z.real(), z.z.imag()}}, {"m", z.multiplicity}});
  return a;
}

}  // namespace

json to_json(const ZeroChainSample& s) {
  return {{"box", {s.box.x0, s.box.x1, s.box.y0, s.box.y1}}, {"count", s.count}, {"zeros", zeros_json(s.zeros)}};
}

json to_json(const DensityEstimate& d) {
  json table = json::array();
  for (const auto& e : d.table) table.push_back({{"s", e.s}, {"count", e.count}, {"estimate", e.estimate}});
  return {{"strip", {d.g0, d.g1}},
          {"table", table},
          {"extrapolated", d.extrapolated},
          {"spread", d.spread},
          {"zeros", zeros_json(d.zeros)}};
}

json to_json(const BohrMean& m) {
  json table = json::array();
  for (const auto& e : m.table) table.push_back({{"s", e.s}, {"value", e.value}});
  return {{"estimate", m.estimate},
          {"extrapolated", m.extrapolated},
          {"spread", m.spread},
          {"torus", m.torus},
          {"table", table}};
}

json to_json(const SlopeJumpMeasure& m) {
  json j = grid_json(m.spec);
  j["mean"] = m.mean;
  j["mass"] = m.mass;
  j["total"] = m.total;
  return j;
}

json to_json(const PullbackReport& r) { return {{"deviations", r.deviations}, {"max_deviation", r.max_deviation}}; }

json to_json(const SupportReport& r) {
  return {{"outside_mass_fraction", r.outside_mass_fraction},
          {"uncovered_amoeba_cells", r.uncovered_amoeba_cells},
          {"amoeba_cells", r.amoeba_cells},
          {"mass_cells", r.mass_cells},
          {"hausdorff_cells", r.hausdorff_cells}};
}

json to_json(const ConvexitySweep& s) {
  return {{"checks", s.checks}, {"violations", s.violations}, {"worst", s.worst}};
}

json to_json(const ComponentFit& f) {
  return {{"cells_used", f.cells_used},
          {"window_truncated", f.window_truncated},
          {"gradient", f.gradient},
          {"intercept", f.intercept},
          {"max_residual", f.max_residual}};
}

json to_json(const ConvexityReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({x.a, x.b, x.blocking});
  return {{"pairs_checked", r.pairs_checked},
          {"violation_count", r.violation_count},
          {"boundary_pairs_only", r.boundary_pairs_only},
          {"violations", v}};
}

json summary_json(const RonkinField& f) {
  std::size_t capped = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < f.capped.size(); ++c) capped += f.capped[c] != 0;
  for (double e : f.err_est) worst = std::max(worst, e);
  json j = grid_json(f.spec);
  j["quad_N"] = f.quad_N;
  j["jensen_axes"] = f.jensen_axes;
  j["max_err_est"] = worst;
  j["flags"] = {{"near_amoeba_reduced_accuracy", capped}};
  return j;
}

json summary_json(const MassGrid& m) {
  json j = grid_json(m.spec);
  j["total_mass"] = m.total;
  j["flags"] = {{"min_mass", m.min_mass}, {"negative_mass", m.min_mass < 0.0}};
  return j;
}

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

void write_with_sidecar(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body,
                        const Provenance& prov, const json& extra) {
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot write " + path.string());
    body(os);
    if (!os) throw UsageError("write failed for " + path.string());
  }
  json meta = extra;
  meta["file"] = path.filename().string();
  meta["config_hash"] = prov.config_hash;
  meta["seed"] = prov.seed;
  meta["version"] = prov.version;
  const auto side = path.string() + ".meta.json";
  std::ofstream ms(side, std::ios::binary);
  if (!ms) throw UsageError("cannot write " + side);
  write_json(ms, meta);
}

}  // namespace amoebakit
