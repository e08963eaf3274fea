#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"

#include "amoebakit/error.hpp"
#include "amoebakit/output.hpp"

using namespace amoebakit;
namespace fs = std::filesystem;

namespace {

GridRegion random_region(const GridSpec& spec, std::mt19937_64& rng) {
  std::bernoulli_distribution b(0.3);
  GridRegion r(spec, spec.h());
  for (auto& o : r.occupied) o = b(rng);
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

fs::path scratch_dir(const char* name) {
  const auto d = fs::temp_directory_path() / ("amoebakit_output_" + std::string(name));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 2000) {
    const std::uint64_t u = bits(rng);
    double x;
    std::memcpy(&x, &u, sizeof x);
    if (!std::isfinite(x)) continue;
    CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
    ++checked;
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(-2.0) == "-2");
}

TEST_CASE("cloud CSV has one point per line") {
  PointCloud c;
  c.n = 2;
  c.coords = {0.5, -1.0 / 3.0, std::log(2.0), 7.0};
  c.outside = {0, 0};
  std::ostringstream os;
  write_cloud_csv(os, c);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "0.5,-0.33333333333333331");
  double a = 0.0, b = 0.0;
  REQUIRE(std::sscanf(ls[1].c_str(), "%lf,%lf", &a, &b) == 2);
  CHECK(a == std::log(2.0));
  CHECK(b == 7.0);
}

TEST_CASE("field CSV lists cell centers in index order") {
  const GridSpec g({0.0, 0.0}, {0.2, 0.3}, 0.1);
  std::vector<double> v(g.cell_count()), e(g.cell_count(), 1e-9);
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = static_cast<double>(c);
  std::ostringstream os;
  write_field_csv(os, g, v, &e);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == g.cell_count() + 1);
  CHECK(ls[0] == "y1,y2,value,err_est");
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    double y1, y2, val, err;
    REQUIRE(std::sscanf(ls[c + 1].c_str(), "%lf,%lf,%lf,%lf", &y1, &y2, &val, &err) == 4);
    CHECK(y1 == g.center(c)[0]);
    CHECK(y2 == g.center(c)[1]);
    CHECK(val == v[c]);
    CHECK(err == 1e-9);
  }
  std::ostringstream plain;
  write_field_csv(plain, g, v);
  CHECK(lines(plain.str())[0] == "y1,y2,value");
  CHECK_THROWS_AS(write_field_csv(plain, g, std::vector<double>(3)), UsageError);
}

TEST_CASE("region PGM layout") {
  const GridSpec g({0.0, 0.0}, {0.3, 0.2}, 0.1);  // 3 wide, 2 tall
  GridRegion r(g, 0.1);
  r.occupied[g.ravel(std::vector<int>{0, 1})] = 1;  // top-left pixel
  r.occupied[g.ravel(std::vector<int>{2, 0})] = 1;  // bottom-right pixel
  std::ostringstream os;
  write_region_pgm(os, r);
  const std::string s = os.str();
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(s.size() == header.size() + 6);
  CHECK(s.substr(0, header.size()) == header);
  const std::string px = s.substr(header.size());
  CHECK(static_cast<unsigned char>(px[0]) == 255);
  CHECK(static_cast<unsigned char>(px[5]) == 255);
  for (int i : {1, 2, 3, 4}) CHECK(px[i] == 0);

  const GridSpec g3({0, 0, 0}, {0.2, 0.3, 0.4}, 0.1);
  std::ostringstream os3;
  write_region_pgm(os3, GridRegion(g3, 0.2));
  CHECK(os3.str().substr(0, 12) == "P5\n2 12\n255\n");
  CHECK_THROWS_AS(write_region_pgm(os3, GridRegion(GridSpec({0, 0, 0, 0}, {1, 1, 1, 1}, 0.5), 0.0)), UsageError);
}

TEST_CASE("region PGM round trip in 1 to 3 dimensions") {
  std::mt19937_64 rng(11);
  const std::vector<GridSpec> specs{GridSpec({-1.0}, {1.0}, 0.1), GridSpec({-1.0, 0.0}, {0.5, 0.7}, 0.1),
                                    GridSpec({0, 0, 0}, {0.5, 0.4, 0.3}, 0.1)};
  for (const auto& g : specs)
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = random_region(g, rng);
      std::stringstream ss;
      write_region_pgm(ss, r);
      const auto back = read_region_pgm(ss, g, r.dilation_r);
      CHECK(back.occupied == r.occupied);
    }
  std::istringstream bad("P5\n4 4\n255\n");
  CHECK_THROWS_AS(read_region_pgm(bad, specs[1], 0.0), UsageError);
}

TEST_CASE("heatmap scales between the finite extremes") {
  const GridSpec g({0.0}, {0.4}, 0.1);
  const std::vector<double> v{-1.0, 3.0, std::numeric_limits<double>::quiet_NaN(), 1.0};
  std::ostringstream os;
  write_heatmap_pgm(os, g, v);
  const std::string s = os.str();
  const std::string px = s.substr(s.size() - 4);
  CHECK(static_cast<unsigned char>(px[0]) == 0);
  CHECK(static_cast<unsigned char>(px[1]) == 255);
  CHECK(static_cast<unsigned char>(px[2]) == 0);
  CHECK(static_cast<unsigned char>(px[3]) == 128);
}

TEST_CASE("config hash") {
  CHECK(config_hash(nlohmann::json::object()) == "9bf65e00c699fdaf");
  nlohmann::json a, b;
  a["a"] = 1;
  a["b"] = {2, 3};
  b["b"] = {2, 3};
  b["a"] = 1;
  CHECK(config_hash(a) == "b7ac409b35c97252");
  CHECK(config_hash(a) == config_hash(b));
  b["a"] = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("sidecars carry provenance") {
  const auto dir = scratch_dir("sidecar");
  const Provenance prov{"00ff", 42, kVersion};
  write_with_sidecar(dir / "x.csv", [](std::ostream& os) { os << "1,2\n"; }, prov, {{"h", 0.5}});
  std::ifstream body(dir / "x.csv");
  std::string first;
  std::getline(body, first);
  CHECK(first == "1,2");
  std::ifstream side(dir / "x.csv.meta.json");
  const auto meta = nlohmann::json::parse(side);
  CHECK(meta["file"] == "x.csv");
  CHECK(meta["config_hash"] == "00ff");
  CHECK(meta["seed"] == 42);
  CHECK(meta["version"] == kVersion);
  CHECK(meta["h"] == 0.5);
  CHECK_THROWS_AS(write_with_sidecar(dir / "missing" / "y.csv", [](std::ostream&) {}, prov), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("report JSON keeps search metadata and is stable") {
  const GridSpec g = symmetric_grid(2, 1.0, 0.1);
  GridRegion pt(g, 0.0);
  pt.occupied[g.ravel(std::vector<int>{10, 10})] = 1;
  const auto rep = scan_caps(pt, 1);
  const auto j = to_json(rep);
  CHECK(j["search"]["radii"].size() == 4);
  CHECK(j["search"]["margin"] == rep.margin);
  CHECK(j["certificates"].size() == rep.certificates.size());
  CHECK(j.dump() == to_json(scan_caps(pt, 1)).dump());
  const auto cert = j["certificates"][0];
  CHECK(cert["plane_axes"].size() == 1);
  CHECK(cert["radius"].get<double>() == rep.certificates[0].radius);

  ZeroChainSample s;
  s.box = {0, 1, -1, 1};
  s.zeros.push_back({{0.5, 0.25}, 2});
  s.count = 2;
  const auto zj = to_json(s);
  CHECK(zj["zeros"][0]["z"][1] == 0.25);
  CHECK(zj["zeros"][0]["m"] == 2);
}
