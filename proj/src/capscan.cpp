#include "amoebakit/capscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "amoebakit/error.hpp"
#include "amoebakit/parallel.hpp"

namespace amoebakit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative tolerance, in units of h, that settles exact lattice ties: open
// sets lose their boundary and the compactness annulus keeps its inner edge.
constexpr double kTie = 1e-9;

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> complement(int n, const std::vector<int>& axes) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (std::find(axes.begin(), axes.end(), j) == axes.end()) out.push_back(j);
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Cells i on `axis` with [lo + i h, lo + (i+1) h] meeting the open interval (a, b).
std::pair<int, int> cells_meeting(const GridSpec& g, int axis, double a, double b) {
  const double lo = g.lo()[axis], h = g.h();
  a += kTie * h;
  b -= kTie * h;
  const int c = g.counts()[axis];
  int i0 = std::max(0, static_cast<int>(std::floor((a - lo) / h)) - 1);
  while (i0 < c && !(lo + (i0 + 1) * h > a)) ++i0;
  int i1 = std::min(c - 1, static_cast<int>(std::ceil((b - lo) / h)) + 1);
  while (i1 >= 0 && !(lo + i1 * h < b)) --i1;
  return {i0, i1};
}

// Cells inside the closed interval [a, b].
std::pair<int, int> cells_inside(const GridSpec& g, int axis, double a, double b) {
  const double lo = g.lo()[axis], h = g.h();
  a -= kTie * h;
  b += kTie * h;
  const int c = g.counts()[axis];
  int i0 = std::max(0, static_cast<int>(std::floor((a - lo) / h)) - 1);
  while (i0 < c && !(lo + i0 * h >= a)) ++i0;
  int i1 = std::min(c - 1, static_cast<int>(std::ceil((b - lo) / h)) + 1);
  while (i1 >= 0 && !(lo + (i1 + 1) * h <= b)) --i1;
  return {i0, i1};
}

// Counts of occupied cells over index boxes.
class PrefixCounts {
 public:
  explicit PrefixCounts(const GridRegion& r) : n_(r.spec.dim()) {
    const auto& c = r.spec.counts();
    ext_.resize(n_);
    stride_.resize(n_);
    std::size_t total = 1;
    for (int j = 0; j < n_; ++j) {
      ext_[j] = c[j] + 1;
      stride_[j] = total;
      total *= static_cast<std::size_t>(ext_[j]);
    }
    sum_.assign(total, 0);
    for (std::size_t cell = 0; cell < r.occupied.size(); ++cell) {
      if (!r.occupied[cell]) continue;
      const auto idx = r.spec.unravel(cell);
      std::size_t at = 0;
      for (int j = 0; j < n_; ++j) at += static_cast<std::size_t>(idx[j] + 1) * stride_[j];
      sum_[at] = 1;
    }
    for (int j = 0; j < n_; ++j) {
      for (std::size_t at = 0; at < total; ++at) {
        if ((at / stride_[j]) % ext_[j] != 0) sum_[at] += sum_[at - stride_[j]];
      }
    }
  }

  // Inclusive index ranges; empty ranges give 0.
  long count(const std::vector<std::pair<int, int>>& ranges) const {
    for (const auto& [a, b] : ranges) {
      if (a > b) return 0;
    }
    long total = 0;
    for (int mask = 0; mask < (1 << n_); ++mask) {
      std::size_t at = 0;
      int sign = 1;
      for (int j = 0; j < n_; ++j) {
        if (mask & (1 << j)) {
          at += static_cast<std::size_t>(ranges[j].first) * stride_[j];
          sign = -sign;
        } else {
          at += static_cast<std::size_t>(ranges[j].second + 1) * stride_[j];
        }
      }
      total += sign * sum_[at];
    }
    return total;
  }

 private:
  int n_;
  std::vector<int> ext_;
  std::vector<std::size_t> stride_;
  std::vector<long> sum_;
};

// Squared Euclidean distance transform on a lattice (Felzenszwalb-Huttenlocher).
void edt_1d(std::vector<double>& f, std::size_t start, std::size_t step, int len, std::vector<double>& d,
            std::vector<int>& v, std::vector<double>& z) {
  d.resize(len);
  v.resize(len);
  z.resize(len + 1);
  int k = -1;
  for (int q = 0; q < len; ++q) {
    const double fq = f[start + q * step];
    if (fq == kInf) continue;
    while (k >= 0) {
      const double fv = f[start + v[k] * step];
      const double s = ((fq + double(q) * q) - (fv + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : ((fq + double(q) * q) - (f[start + v[k - 1] * step] + double(v[k - 1]) * v[k - 1])) /
                                (2.0 * (q - v[k - 1]));
    z[k + 1] = kInf;
  }
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < len; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[start + v[j] * step];
  }
  for (int q = 0; q < len; ++q) f[start + q * step] = d[q];
}

void edt(std::vector<double>& f, const std::vector<int>& len) {
  const int k = static_cast<int>(len.size());
  std::vector<std::size_t> stride(k);
  std::size_t total = 1;
  for (int a = 0; a < k; ++a) {
    stride[a] = total;
    total *= static_cast<std::size_t>(len[a]);
  }
  std::vector<double> d, z;
  std::vector<int> v;
  for (int a = 0; a < k; ++a) {
    for (std::size_t start = 0; start < total; ++start) {
      if ((start / stride[a]) % len[a] != 0) continue;
      edt_1d(f, start, stride[a], len[a], d, v, z);
    }
  }
}

struct Direction {
  int axis = 0;
  int sign = 1;
};

struct PlaneJob {
  int subset = 0;
  std::vector<int> offset;  // half-lattice positions on the normal axes
};

struct PlaneResult {
  std::vector<CapCertificate> certs;
  std::size_t candidates = 0;
  std::size_t skipped = 0;
};

bool cert_less(const CapCertificate& a, const CapCertificate& b) {
  const auto pa = a.plane_axes(), pb = b.plane_axes();
  if (pa != pb) return pa < pb;
  if (a.frame != b.frame) return a.frame < b.frame;
  if (a.base != b.base) return a.base < b.base;
  if (a.radius != b.radius) return a.radius < b.radius;
  return a.direction < b.direction;
}

void check_region(const GridRegion& region) {
  if (region.occupied.size() != region.spec.cell_count()) throw UsageError("region does not match its grid");
}

}  // namespace

std::vector<int> CapCertificate::plane_axes() const {
  std::vector<int> axes;
  for (const auto& u : frame) {
    int axis = -1;
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (u[j] == 1.0 && axis < 0) {
        axis = static_cast<int>(j);
      } else if (u[j] != 0.0) {
        return {};
      }
    }
    if (axis < 0) return {};
    axes.push_back(axis);
  }
  return axes;
}

CapCertificate axis_cap(std::vector<int> axes, std::vector<double> base, double radius, double margin,
                        int normal_axis, int sign, double eps_max) {
  const int n = static_cast<int>(base.size());
  CapCertificate c;
  c.k = static_cast<int>(axes.size());
  for (int a : axes) {
    if (a < 0 || a >= n) throw UsageError("plane axis out of range");
    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    u[a] = 1.0;
    c.frame.push_back(std::move(u));
  }
  c.base = std::move(base);
  c.radius = radius;
  c.margin = margin;
  if (normal_axis < 0 || normal_axis >= n) throw UsageError("direction axis out of range");
  c.direction.assign(static_cast<std::size_t>(n), 0.0);
  c.direction[normal_axis] = sign >= 0 ? 1.0 : -1.0;
  c.eps_max = eps_max;
  return c;
}

std::vector<double> eps_grid(double h, double eps_max) {
  const double e0 = 0.5 * h;
  if (!(eps_max > e0)) throw UsageError("eps_max must exceed h/2");
  std::vector<double> out;
  for (int i = 1; i <= 8; ++i) out.push_back(i == 8 ? eps_max : e0 * std::pow(eps_max / e0, i / 8.0));
  return out;
}

double slab_half_thickness(const GridRegion& region) { return std::max(region.dilation_r, 0.5 * region.spec.h()); }

CapVerification verify_cap(const GridRegion& region, const CapCertificate& cert) {
  check_region(region);
  const GridSpec& g = region.spec;
  const int n = g.dim();
  const int k = cert.k;
  if (cert.dim() != n || static_cast<int>(cert.direction.size()) != n) throw UsageError("certificate dimension mismatch");
  if (k < 1 || k > n || static_cast<int>(cert.frame.size()) != k) throw UsageError("certificate plane is malformed");
  for (int s = 0; s < k; ++s) {
    if (static_cast<int>(cert.frame[s].size()) != n) throw UsageError("frame vector has the wrong length");
    for (int r = 0; r < k; ++r) {
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += cert.frame[s][j] * cert.frame[r][j];
      if (std::abs(dot - (s == r ? 1.0 : 0.0)) > 1e-9) throw UsageError("frame is not orthonormal");
    }
  }
  double vnorm = 0.0;
  for (double x : cert.direction) vnorm += x * x;
  if (std::abs(vnorm - 1.0) > 1e-9) throw UsageError("direction is not a unit vector");
  if (!(cert.margin > 0.0 && cert.margin < cert.radius)) throw UsageError("margin must lie in (0, radius)");
  const std::vector<double> eps = eps_grid(g.h(), cert.eps_max);
  const double tie = kTie * g.h();
  const double t = slab_half_thickness(region) - tie;
  const double rho = cert.radius;
  const double rho_in = rho - tie;

  // axis extents of the slab-ball: rho |P e_j| + t |(I - P) e_j|
  std::vector<double> ext(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double in = 0.0;
    for (int s = 0; s < k; ++s) in += cert.frame[s][j] * cert.frame[s][j];
    in = std::min(in, 1.0);
    ext[j] = rho * std::sqrt(in) + t * std::sqrt(1.0 - in);
  }
  for (double e : {0.0, cert.eps_max}) {
    for (int j = 0; j < n; ++j) {
      const double c = cert.base[j] + e * cert.direction[j];
      if (c - ext[j] < g.lo()[j] || c + ext[j] > g.hi()[j]) {
        throw UsageError("cap leaves the window on axis " + std::to_string(j));
      }
    }
  }

  // visits occupied cells of B + e v as (in-plane distance^2)
  auto visit = [&](double e, auto&& on_hit) {
    std::vector<std::pair<int, int>> range(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double c = cert.base[j] + e * cert.direction[j];
      range[j] = cells_meeting(g, j, c - ext[j] - g.h(), c + ext[j] + g.h());
      if (range[j].first > range[j].second) return;
    }
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) idx[j] = range[j].first;
    std::vector<double> d(static_cast<std::size_t>(n)), ts(static_cast<std::size_t>(k));
    while (true) {
      if (region.occupied[g.ravel(idx)]) {
        for (int j = 0; j < n; ++j) d[j] = (g.center(j, idx[j]) - e * cert.direction[j]) - cert.base[j];
        double r2 = 0.0;
        for (int s = 0; s < k; ++s) {
          ts[s] = 0.0;
          for (int j = 0; j < n; ++j) ts[s] += cert.frame[s][j] * d[j];
          r2 += ts[s] * ts[s];
        }
        double res2 = 0.0;
        for (int j = 0; j < n; ++j) {
          double rj = d[j];
          for (int s = 0; s < k; ++s) rj -= cert.frame[s][j] * ts[s];
          res2 += rj * rj;
        }
        if (res2 < t * t && r2 < rho_in * rho_in) {
          if (!on_hit(r2, idx)) return;
        }
      }
      int j = 0;
      while (j < n && ++idx[j] > range[j].second) {
        idx[j] = range[j].first;
        ++j;
      }
      if (j == n) break;
    }
  };

  CapVerification out;
  const double inner = rho - cert.margin - tie;
  out.compact = true;
  visit(0.0, [&](double r2, const std::vector<int>& idx) {
    out.nonempty = true;
    if (std::sqrt(r2) >= inner) {
      out.compact = false;
      std::string cell;
      for (int j = 0; j < n; ++j) cell += (j ? "," : "") + std::to_string(idx[j]);
      out.failures.push_back("(ii) cell (" + cell + ") at in-plane distance " + fmt(std::sqrt(r2)) +
                             " exceeds radius - margin " + fmt(inner));
      return false;
    }
    return true;
  });
  if (!out.nonempty) {
    out.compact = false;
    out.failures.push_back("(i) no occupied cell in B");
  }
  out.translates_clear = true;
  for (double e : eps) {
    bool hit = false;
    visit(e, [&](double, const std::vector<int>&) {
      hit = true;
      return false;
    });
    if (hit) {
      out.translates_clear = false;
      out.failures.push_back("(iii) translate by eps = " + fmt(e) + " meets the set");
      break;
    }
  }
  out.pass = out.nonempty && out.compact && out.translates_clear;
  return out;
}

CapScanReport scan_caps(const GridRegion& region, int k, const CapSearch& search) {
  check_region(region);
  const GridSpec& g = region.spec;
  const int n = g.dim();
  if (k < 1 || k > n) throw UsageError("cap dimension must lie in [1, n]");
  const double h = g.h();
  CapScanReport rep;
  rep.k = k;
  rep.radii = search.radii.empty() ? std::vector<double>{1.5 * h, 3 * h, 6 * h, 12 * h} : search.radii;
  rep.margin = search.margin > 0.0 ? search.margin : h * std::sqrt(static_cast<double>(k));
  rep.eps_max = search.eps_max > 0.0 ? search.eps_max : 4 * h;
  rep.slab = slab_half_thickness(region);
  rep.offset_step = 0.5 * h;
  if (k == n) return rep;  // no normal direction to translate along
  for (double r : rep.radii) {
    if (!(r > rep.margin)) throw UsageError("every radius must exceed the margin");
  }

  const std::vector<double> eps = eps_grid(h, rep.eps_max);
  const double tie = kTie * h;
  const double t = rep.slab - tie;
  const double hh = 0.25 * h * h;
  const auto sets = subsets(n, k);
  const auto& cnt = g.counts();
  auto half_pos = [&](int axis, int m) { return g.lo()[axis] + m * 0.5 * h; };

  std::vector<PlaneJob> jobs;
  for (int si = 0; si < static_cast<int>(sets.size()); ++si) {
    const auto normal = complement(n, sets[si]);
    std::vector<int> m(normal.size(), 1);
    while (true) {
      jobs.push_back({si, m});
      std::size_t a = 0;
      while (a < normal.size() && ++m[a] > 2 * cnt[normal[a]] - 1) {
        m[a] = 1;
        ++a;
      }
      if (a == normal.size()) break;
    }
  }
  rep.planes = jobs.size();

  std::vector<PlaneResult> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t ji) {
    const auto& axes = sets[jobs[ji].subset];
    const auto normal = complement(n, axes);
    const int nn = static_cast<int>(normal.size());
    PlaneResult& res = results[ji];
    std::vector<double> base(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < nn; ++a) base[normal[a]] = half_pos(normal[a], jobs[ji].offset[a]);

    std::vector<Direction> dirs;
    for (int a : normal) {
      for (int s : {1, -1}) dirs.push_back({a, s});
    }
    std::vector<int> in_len(static_cast<std::size_t>(k)), lat_len(static_cast<std::size_t>(k));
    std::size_t in_total = 1, lat_total = 1;
    for (int s = 0; s < k; ++s) {
      in_len[s] = cnt[axes[s]];
      lat_len[s] = 2 * cnt[axes[s]] + 1;
      in_total *= static_cast<std::size_t>(in_len[s]);
      lat_total *= static_cast<std::size_t>(lat_len[s]);
    }
    std::size_t bases_radii = rep.radii.size();
    for (int s = 0; s < k; ++s) bases_radii *= static_cast<std::size_t>(2 * cnt[axes[s]] - 1);

    // the plane slab itself must fit
    bool slab_fits = true;
    for (int a : normal) slab_fits = slab_fits && base[a] - t >= g.lo()[a] && base[a] + t <= g.hi()[a];
    if (!slab_fits) {
      res.skipped += bases_radii * dirs.size();
      return;
    }
    std::vector<char> dir_fits(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const double c = base[dirs[d].axis] + dirs[d].sign * rep.eps_max;
      dir_fits[d] = c - t >= g.lo()[dirs[d].axis] && c + t <= g.hi()[dirs[d].axis];
    }

    // in-plane occupancy of the slab shifted by e along direction d, and its
    // half-lattice distance transform
    auto project = [&](double e, const Direction* d, std::vector<char>& occ, std::vector<double>& dist) {
      occ.assign(in_total, 0);
      std::vector<std::pair<int, int>> nr(static_cast<std::size_t>(nn));
      for (int a = 0; a < nn; ++a) {
        const int ax = normal[a];
        const double c = base[ax] + (d && d->axis == ax ? d->sign * e : 0.0);
        nr[a] = cells_meeting(g, ax, c - t - h, c + t + h);
        if (nr[a].first > nr[a].second) {
          dist.assign(lat_total, kInf);
          return;
        }
      }
      std::vector<int> full(static_cast<std::size_t>(n)), ni(static_cast<std::size_t>(nn));
      for (int a = 0; a < nn; ++a) ni[a] = nr[a].first;
      while (true) {
        double res2 = 0.0;
        for (int a = 0; a < nn; ++a) {
          const int ax = normal[a];
          const double v = d && d->axis == ax ? double(d->sign) : 0.0;
          const double dj = (g.center(ax, ni[a]) - e * v) - base[ax];
          res2 += dj * dj;
          full[ax] = ni[a];
        }
        if (res2 < t * t) {
          for (std::size_t p = 0; p < in_total; ++p) {
            std::size_t r = p;
            for (int s = 0; s < k; ++s) {
              full[axes[s]] = static_cast<int>(r % in_len[s]);
              r /= in_len[s];
            }
            if (region.occupied[g.ravel(full)]) occ[p] = 1;
          }
        }
        int a = 0;
        while (a < nn && ++ni[a] > nr[a].second) {
          ni[a] = nr[a].first;
          ++a;
        }
        if (a == nn) break;
      }
      dist.assign(lat_total, kInf);
      for (std::size_t p = 0; p < in_total; ++p) {
        if (!occ[p]) continue;
        std::size_t r = p, at = 0, st = 1;
        for (int s = 0; s < k; ++s) {
          at += static_cast<std::size_t>(2 * (r % in_len[s]) + 1) * st;
          r /= in_len[s];
          st *= static_cast<std::size_t>(lat_len[s]);
        }
        dist[at] = 0.0;
      }
      edt(dist, lat_len);
    };

    std::vector<char> occ0;
    std::vector<double> dist0;
    project(0.0, nullptr, occ0, dist0);
    std::vector<std::vector<std::vector<double>>> shifted(dirs.size());
    std::vector<char> scratch;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      if (!dir_fits[d]) continue;
      shifted[d].resize(eps.size());
      for (std::size_t i = 0; i < eps.size(); ++i) project(eps[i], &dirs[d], scratch, shifted[d][i]);
    }

    std::vector<int> m(static_cast<std::size_t>(k), 1);
    while (true) {
      std::size_t at = 0, st = 1;
      for (int s = 0; s < k; ++s) {
        base[axes[s]] = half_pos(axes[s], m[s]);
        at += static_cast<std::size_t>(m[s]) * st;
        st *= static_cast<std::size_t>(lat_len[s]);
      }
      for (double rho : rep.radii) {
        bool fits = true;
        for (int s = 0; s < k; ++s) {
          fits = fits && base[axes[s]] - rho >= g.lo()[axes[s]] && base[axes[s]] + rho <= g.hi()[axes[s]];
        }
        if (!fits) {
          res.skipped += dirs.size();
          continue;
        }
        for (std::size_t d = 0; d < dirs.size(); ++d) {
          if (!dir_fits[d]) ++res.skipped;
        }
        const double rho2 = (rho - tie) * (rho - tie);
        if (!(dist0[at] * hh < rho2)) {
          for (std::size_t d = 0; d < dirs.size(); ++d) res.candidates += dir_fits[d];
          continue;
        }
        int compact = -1;  // lazily evaluated (ii)
        for (std::size_t d = 0; d < dirs.size(); ++d) {
          if (!dir_fits[d]) continue;
          ++res.candidates;
          bool clear = true;
          for (const auto& sd : shifted[d]) clear = clear && sd[at] * hh >= rho2;
          if (!clear) continue;
          if (compact < 0) {
            compact = 1;
            const double inner = rho - rep.margin - tie;
            for (std::size_t p = 0; p < in_total && compact; ++p) {
              if (!occ0[p]) continue;
              std::size_t r = p;
              double r2 = 0.0;
              for (int s = 0; s < k; ++s) {
                const double dd = g.center(axes[s], static_cast<int>(r % in_len[s])) - base[axes[s]];
                r2 += dd * dd;
                r /= in_len[s];
              }
              if (r2 < rho2 && std::sqrt(r2) >= inner) compact = 0;
            }
          }
          if (!compact) break;
          CapCertificate cert = axis_cap(axes, base, rho, rep.margin, dirs[d].axis, dirs[d].sign, rep.eps_max);
          if (verify_cap(region, cert).pass) res.certs.push_back(std::move(cert));
        }
      }
      int s = 0;
      while (s < k && ++m[s] > 2 * cnt[axes[s]] - 1) {
        m[s] = 1;
        ++s;
      }
      if (s == k) break;
    }
  });
  for (auto& r : results) {
    rep.candidates += r.candidates;
    rep.skipped_overflow += r.skipped;
    for (auto& c : r.certs) rep.certificates.push_back(std::move(c));
  }
  std::sort(rep.certificates.begin(), rep.certificates.end(), cert_less);
  return rep;
}

std::vector<double> HartogsFigure::center() const {
  std::vector<double> c = base;
  for (std::size_t j = 0; j < c.size() && j < shift.size(); ++j) c[j] += shift[j];
  return c;
}

namespace {

void validate_figure(const HartogsFigure& fig, int n) {
  if (fig.dim() != n || static_cast<int>(fig.shift.size()) != n) throw UsageError("figure dimension mismatch");
  if (fig.q < 1 || fig.q > n - 1) throw UsageError("figure type q must lie in [1, n-1]");
  if (static_cast<int>(fig.w_axes.size()) != fig.q || static_cast<int>(fig.z_axes.size()) != n - fig.q) {
    throw UsageError("figure axes do not match its type");
  }
  std::vector<int> all = fig.z_axes;
  all.insert(all.end(), fig.w_axes.begin(), fig.w_axes.end());
  std::sort(all.begin(), all.end());
  for (int j = 0; j < n; ++j) {
    if (all[j] != j) throw UsageError("figure axes must partition the coordinates");
  }
  if (!(fig.alpha > 0.0 && fig.alpha < 1.0 && fig.beta > 0.0 && fig.beta < 1.0)) {
    throw UsageError("alpha and beta must lie in (0, 1)");
  }
  if (!(fig.z_half > 0.0 && fig.w_half > 0.0)) throw UsageError("figure half-sides must be positive");
}

HartogsResult check_with(const GridRegion& region, const PrefixCounts& pc, const HartogsFigure& fig) {
  const GridSpec& g = region.spec;
  const int n = g.dim();
  const std::vector<double> c = fig.center();
  std::vector<double> half(static_cast<std::size_t>(n));
  for (int a : fig.z_axes) half[a] = fig.z_half;
  for (int a : fig.w_axes) half[a] = fig.w_half;
  for (int j = 0; j < n; ++j) {
    if (c[j] - half[j] < g.lo()[j] || c[j] + half[j] > g.hi()[j]) {
      throw UsageError("figure hull leaves the window on axis " + std::to_string(j));
    }
  }
  std::vector<std::pair<int, int>> hull(static_cast<std::size_t>(n)), thin, inner;
  for (int j = 0; j < n; ++j) hull[j] = cells_meeting(g, j, c[j] - half[j], c[j] + half[j]);
  thin = inner = hull;
  for (int a : fig.w_axes) thin[a] = cells_meeting(g, a, c[a] - fig.alpha * fig.w_half, c[a] + fig.alpha * fig.w_half);
  for (int a : fig.z_axes) inner[a] = cells_inside(g, a, c[a] - fig.beta * fig.z_half, c[a] + fig.beta * fig.z_half);
  const long in_hull = pc.count(hull);
  HartogsResult r;
  r.hull_meets = in_hull > 0;
  r.figure_clear = pc.count(thin) == 0 && in_hull - pc.count(inner) == 0;
  return r;
}

}  // namespace

HartogsResult hartogs_check(const GridRegion& region, const HartogsFigure& fig) {
  check_region(region);
  validate_figure(fig, region.spec.dim());
  return check_with(region, PrefixCounts(region), fig);
}

HartogsFigure cap_to_hartogs(const CapCertificate& cert, const GridRegion& region) {
  check_region(region);
  const GridSpec& g = region.spec;
  const int n = g.dim();
  const auto axes = cert.plane_axes();
  if (axes.empty()) throw UsageError("cap_to_hartogs needs an axis-aligned plane");
  if (cert.k >= n) throw UsageError("cap_to_hartogs needs k < n");
  const auto normal = complement(n, axes);
  int v_axis = -1;
  for (int j = 0; j < n; ++j) {
    if (cert.direction[j] != 0.0) {
      if (v_axis >= 0 || std::abs(cert.direction[j]) != 1.0) v_axis = -2;
      if (v_axis == -1) v_axis = j;
    }
  }
  if (v_axis < 0 || std::find(normal.begin(), normal.end(), v_axis) == normal.end()) {
    throw UsageError("cap_to_hartogs needs v along a normal axis");
  }
  const auto ver = verify_cap(region, cert);
  if (!ver.pass) throw UsageError("certificate does not verify: " + ver.failures.front());

  HartogsFigure fig;
  fig.q = n - cert.k;
  fig.z_axes = axes;
  fig.w_axes = normal;
  fig.base = cert.base;
  fig.z_half = cert.radius;
  fig.w_half = cert.eps_max;
  fig.shift.assign(static_cast<std::size_t>(n), 0.0);
  fig.shift[v_axis] = 0.5 * cert.eps_max * cert.direction[v_axis];
  const std::vector<double> c = fig.center();
  std::vector<double> half(static_cast<std::size_t>(n));
  for (int a : fig.z_axes) half[a] = fig.z_half;
  for (int a : fig.w_axes) half[a] = fig.w_half;
  for (int j = 0; j < n; ++j) {
    if (c[j] - half[j] < g.lo()[j] || c[j] + half[j] > g.hi()[j]) {
      throw UsageError("figure hull leaves the window on axis " + std::to_string(j));
    }
  }

  // admissible ranges from the closed occupied cells meeting the hull, in
  // figure coordinates
  double alpha_needed = 1.0, beta_needed = 0.0;
  bool any = false;
  std::vector<std::pair<int, int>> range(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) range[j] = cells_meeting(g, j, c[j] - half[j], c[j] + half[j]);
  for (const auto& [a, b] : range) {
    if (a > b) throw NumericError("cap not convertible at resolution h: empty hull");
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) idx[j] = range[j].first;
  while (true) {
    if (region.occupied[g.ravel(idx)]) {
      any = true;
      double wdist = 0.0, zmax = 0.0;
      for (int j = 0; j < n; ++j) {
        const double l = (g.lo()[j] + idx[j] * g.h() - c[j]) / half[j];
        const double r = (g.lo()[j] + (idx[j] + 1) * g.h() - c[j]) / half[j];
        if (std::find(fig.w_axes.begin(), fig.w_axes.end(), j) != fig.w_axes.end()) {
          wdist = std::max(wdist, std::max({0.0, l, -r}));
        } else {
          zmax = std::max(zmax, std::max(std::abs(l), std::abs(r)));
        }
      }
      alpha_needed = std::min(alpha_needed, wdist);
      beta_needed = std::max(beta_needed, zmax);
    }
    int j = 0;
    while (j < n && ++idx[j] > range[j].second) {
      idx[j] = range[j].first;
      ++j;
    }
    if (j == n) break;
  }
  const double h = g.h();
  if (!any || alpha_needed * fig.w_half < 0.5 * h || (1.0 - beta_needed) * fig.z_half < 0.5 * h) {
    throw NumericError("cap not convertible at resolution h = " + fmt(h));
  }
  fig.alpha = 0.5 * alpha_needed;
  fig.beta = 0.5 * (beta_needed + 1.0);
  const HartogsResult hr = hartogs_check(region, fig);
  if (!hr.witness()) throw NumericError("cap not convertible at resolution h = " + fmt(h));
  return fig;
}

HartogsScanReport scan_hartogs(const GridRegion& region, int q, const HartogsSearch& search) {
  check_region(region);
  const GridSpec& g = region.spec;
  const int n = g.dim();
  if (q < 1 || q > n - 1) throw UsageError("figure type q must lie in [1, n-1]");
  const double h = g.h();
  const std::vector<double> sizes =
      search.sizes.empty() ? std::vector<double>{1.5 * h, 3 * h, 6 * h, 12 * h} : search.sizes;
  const double step = search.center_step > 0.0 ? search.center_step : 0.5 * h;
  for (double a : search.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  }
  for (double b : search.betas) {
    if (!(b > 0.0 && b < 1.0)) throw UsageError("beta must lie in (0, 1)");
  }
  const PrefixCounts pc(region);
  HartogsScanReport rep;
  rep.q = q;
  const auto wsets = subsets(n, q);
  std::vector<int> per_axis(static_cast<std::size_t>(n));
  std::size_t centers = 1;
  for (int j = 0; j < n; ++j) {
    per_axis[j] = static_cast<int>(std::floor((g.hi()[j] - g.lo()[j]) / step)) - 1;
    if (per_axis[j] < 1) return rep;
    centers *= static_cast<std::size_t>(per_axis[j]);
  }
  struct Chunk {
    std::vector<HartogsFigure> found;
    std::size_t figures = 0, skipped = 0;
  };
  const std::size_t jobs = wsets.size() * centers;
  constexpr std::size_t kChunk = 256;
  std::vector<Chunk> chunks((jobs + kChunk - 1) / kChunk);
  parallel_for(chunks.size(), [&](std::size_t ci) {
    Chunk& out = chunks[ci];
    for (std::size_t job = ci * kChunk; job < std::min(jobs, (ci + 1) * kChunk); ++job) {
      const auto& w = wsets[job / centers];
      std::size_t r = job % centers;
      HartogsFigure fig;
      fig.q = q;
      fig.w_axes = w;
      fig.z_axes = complement(n, w);
      fig.base.resize(static_cast<std::size_t>(n));
      fig.shift.assign(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j < n; ++j) {
        fig.base[j] = g.lo()[j] + static_cast<double>(r % per_axis[j] + 1) * step;
        r /= per_axis[j];
      }
      for (double sz : sizes) {
        bool fits = true;
        for (int j = 0; j < n; ++j) fits = fits && fig.base[j] - sz >= g.lo()[j] && fig.base[j] + sz <= g.hi()[j];
        const std::size_t variants = search.alphas.size() * search.betas.size();
        if (!fits) {
          out.skipped += variants;
          continue;
        }
        fig.z_half = fig.w_half = sz;
        for (double a : search.alphas) {
          for (double b : search.betas) {
            fig.alpha = a;
            fig.beta = b;
            ++out.figures;
            if (check_with(region, pc, fig).witness()) out.found.push_back(fig);
          }
        }
      }
    }
  });
  for (auto& c : chunks) {
    rep.figures += c.figures;
    rep.skipped_overflow += c.skipped;
    for (auto& f : c.found) rep.witnesses.push_back(std::move(f));
  }
  return rep;
}

}  // namespace amoebakit
