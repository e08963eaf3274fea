#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "amoebakit/ap_mean.hpp"
#include "amoebakit/capscan.hpp"
#include "amoebakit/components.hpp"
#include "amoebakit/grid.hpp"
#include "amoebakit/raster.hpp"
#include "amoebakit/ronkin.hpp"
#include "amoebakit/sampling.hpp"

namespace amoebakit {

inline constexpr const char* kVersion = "0.1.0";

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double x);

/// One point per line, coordinates y1..yn.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);

/// Header y1..yn,value[,err_est], one row per cell in index order.
void write_field_csv(std::ostream& os, const GridSpec& spec, const std::vector<double>& values,
                     const std::vector<double>* err_est = nullptr);

/// Binary PGM, occupied = 255. Rows run from the top of axis 1 down; for
/// n = 3 the axis-2 slices are stacked top to bottom in ascending order and
/// for n = 1 the image is a single row.
void write_region_pgm(std::ostream& os, const GridRegion& region);

/// Linear grey scale from the smallest to the largest finite value;
/// non-finite cells are black. Same layout as write_region_pgm.
void write_heatmap_pgm(std::ostream& os, const GridSpec& spec, const std::vector<double>& values);

/// Reads back a P5 image written by write_region_pgm (any nonzero byte is occupied).
GridRegion read_region_pgm(std::istream& is, const GridSpec& spec, double dilation_r);

nlohmann::json grid_json(const GridSpec& spec);
nlohmann::json region_json(const GridRegion& region);  // {window, h, dilation_r, counts, occupied}

nlohmann::json to_json(const CapCertificate& c);
nlohmann::json to_json(const CapVerification& v);
nlohmann::json to_json(const CapScanReport& r);
nlohmann::json to_json(const HartogsFigure& f);
nlohmann::json to_json(const HartogsResult& r);
nlohmann::json to_json(const HartogsScanReport& r);
nlohmann::json to_json(const ZeroChainSample& s);
nlohmann::json to_json(const DensityEstimate& d);
nlohmann::json to_json(const BohrMean& m);
nlohmann::json to_json(const SlopeJumpMeasure& m);
nlohmann::json to_json(const PullbackReport& r);
nlohmann::json to_json(const SupportReport& r);
nlohmann::json to_json(const ConvexitySweep& s);
nlohmann::json to_json(const ComponentFit& f);
nlohmann::json to_json(const ConvexityReport& r);
nlohmann::json summary_json(const RonkinField& f);
nlohmann::json summary_json(const MassGrid& m);

/// 64-bit FNV-1a of the compact dump (object keys are sorted), as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = kVersion;
};

/// Writes `path` through `body`, then `path` + ".meta.json" holding the
/// provenance plus `extra`. Throws UsageError if either file cannot be written.
void write_with_sidecar(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body,
                        const Provenance& prov, const nlohmann::json& extra = nlohmann::json::object());

/// Pretty JSON with two-space indent and a trailing newline.
void write_json(std::ostream& os, const nlohmann::json& j);

}  // namespace amoebakit
