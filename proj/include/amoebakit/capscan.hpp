#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "amoebakit/grid.hpp"

namespace amoebakit {

/// Ball of radius `radius` in the affine k-plane base + span(frame), with a
/// direction v along which small translates of the ball must miss the set.
struct CapCertificate {
  int k = 0;
  std::vector<std::vector<double>> frame;  // k orthonormal vectors of length n
  std::vector<double> base;                // ball center
  double radius = 0.0;
  double margin = 0.0;                     // delta in (0, radius)
  std::vector<double> direction;           // unit vector v
  double eps_max = 0.0;

  int dim() const { return static_cast<int>(base.size()); }
  /// Axis indices of the frame when every frame vector is a coordinate
  /// vector; empty otherwise.
  std::vector<int> plane_axes() const;
};

/// Axis-aligned certificate through `base` spanned by `axes`, v = sign * e_normal_axis.
CapCertificate axis_cap(std::vector<int> axes, std::vector<double> base, double radius, double margin,
                        int normal_axis, int sign, double eps_max);

/// The translates checked by condition (iii): eps_i = (h/2) (eps_max / (h/2))^{i/8}, i = 1..8.
std::vector<double> eps_grid(double h, double eps_max);

/// Half-thickness of the plane slab for a region: max(dilation_r, h/2).
double slab_half_thickness(const GridRegion& region);

struct CapVerification {
  bool pass = false;
  bool nonempty = false;       // (i)
  bool compact = false;        // (ii)
  bool translates_clear = false;  // (iii)
  std::vector<std::string> failures;
};

/// Checks the three cap conditions on cell centers. A center belongs to B
/// when its distance to the plane is below the slab half-thickness and its
/// in-plane distance to the base is below the radius (open ball). Throws
/// UsageError if B + eps v leaves the window for some eps in [0, eps_max].
CapVerification verify_cap(const GridRegion& region, const CapCertificate& cert);

struct CapSearch {
  std::vector<double> radii;  // empty: {1.5, 3, 6, 12} * h
  double margin = 0.0;        // 0: h * sqrt(k), so a chain of neighbouring cells cannot jump the annulus
  double eps_max = 0.0;       // 0: 4 h
};

struct CapScanReport {
  int k = 0;
  std::vector<double> radii;
  double margin = 0.0;
  double eps_max = 0.0;
  double slab = 0.0;
  double offset_step = 0.0;  // plane offsets and ball centers lie on multiples of h/2 from the window corner
  std::size_t planes = 0;
  std::size_t candidates = 0;
  std::size_t skipped_overflow = 0;
  std::vector<CapCertificate> certificates;  // sorted by plane axes, base, radius, direction
};

/// Axis-aligned k-planes at half-cell offsets, balls of the given radii
/// centered on the half-cell lattice, directions +-e_j for the normal axes.
/// Candidates whose translates leave the window are skipped. Every returned
/// certificate passes verify_cap. An empty list means none found at this
/// resolution and search family.
CapScanReport scan_caps(const GridRegion& region, int k, const CapSearch& search = {});

/// (n-q, q)-Hartogs figure in an axis-aligned frame: in figure coordinates
/// u = (y - base - shift) / scale, with z = u on z_axes and w = u on w_axes,
///   H    = {|z|_inf < 1, |w|_inf < alpha} U {beta < |z|_inf < 1, |w|_inf < 1}
///   hull = {|u|_inf < 1}.
struct HartogsFigure {
  int q = 0;
  double alpha = 0.0, beta = 0.0;
  std::vector<int> z_axes, w_axes;
  std::vector<double> base;
  double z_half = 0.0, w_half = 0.0;
  std::vector<double> shift;

  int dim() const { return static_cast<int>(base.size()); }
  std::vector<double> center() const;
};

struct HartogsResult {
  bool figure_clear = false;
  bool hull_meets = false;
  bool witness() const { return figure_clear && hull_meets; }
};

/// Tests the real slice of the figure and of its hull against the closed
/// occupied cells. Throws UsageError if the hull leaves the window.
HartogsResult hartogs_check(const GridRegion& region, const HartogsFigure& fig);

/// The figure of the cap-to-figure construction: z along the cap plane with
/// half-side radius, w along the normal axes with half-side eps_max, shifted
/// by eps_max / 2 along v. beta and alpha sit halfway inside their admissible
/// ranges. Throws UsageError if the certificate does not verify or is not
/// axis-aligned, and NumericError "cap not convertible at resolution h" if
/// either range is narrower than half a cell in real units or the result is
/// not a witness.
HartogsFigure cap_to_hartogs(const CapCertificate& cert, const GridRegion& region);

struct HartogsSearch {
  std::vector<double> sizes;   // empty: {1.5, 3, 6, 12} * h; used for both half-sides
  std::vector<double> alphas = {0.25, 0.5};
  std::vector<double> betas = {0.5, 0.75};
  double center_step = 0.0;    // 0: h / 2
};

struct HartogsScanReport {
  int q = 0;
  std::size_t figures = 0;
  std::size_t skipped_overflow = 0;
  std::vector<HartogsFigure> witnesses;
};

/// Axis-aligned figures of type (n-q, q) over every choice of w axes, lattice
/// center, size, alpha and beta. Witnesses are returned in scan order.
HartogsScanReport scan_hartogs(const GridRegion& region, int q, const HartogsSearch& search = {});

}  // namespace amoebakit
