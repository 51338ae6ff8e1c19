#include "mcrem/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "mcrem/error.hpp"

namespace mcrem {

WeightFamily::WeightFamily(WeightKind kind, BoundaryPointSet anchors, int dim)
    : kind_(kind), anchors_(std::move(anchors)), dim_(dim) {
  if (anchors_.size() == 0) throw InvalidInput("weight family has no anchors");
  if (dim_ != 2 && dim_ != 3) throw InvalidInput("dimension must be 2 or 3");
  if (anchors_.size() >= 0xFFFFFFFFu) throw InvalidInput("too many anchors");
  build_grid();
}

void WeightFamily::build_grid() {
  auto const& pts = anchors_.points;
  Point hi = pts[0];
  lo_ = pts[0];
  for (auto const& p : pts) {
    for (int k = 0; k < dim_; ++k) {
      lo_[k] = std::min(lo_[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  double extent = 0.0;
  for (int k = 0; k < dim_; ++k) extent = std::max(extent, hi[k] - lo_[k]);
  if (!(extent > 0.0)) extent = 1.0;
  // Anchors sit on curves or surfaces, so size cells by a (d-1)-dimensional
  // density: about one anchor per cell along the boundary.
  double const m = static_cast<double>(pts.size());
  cell_ = dim_ == 2 ? 4.0 * extent / m : 2.0 * extent / std::sqrt(m);
  cell_ = std::max(cell_, extent / 256.0);
  std::size_t total = 1;
  for (int k = 0; k < 3; ++k) {
    cells_[k] = k < dim_ ? static_cast<int>((hi[k] - lo_[k]) / cell_) + 1 : 1;
    total *= static_cast<std::size_t>(cells_[k]);
  }
  std::vector<std::size_t> owner(pts.size());
  std::vector<std::uint32_t> count(total + 1, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t idx = 0;
    for (int k = dim_ - 1; k >= 0; --k) {
      int c = static_cast<int>((pts[i][k] - lo_[k]) / cell_);
      c = std::clamp(c, 0, cells_[k] - 1);
      idx = idx * static_cast<std::size_t>(cells_[k]) + static_cast<std::size_t>(c);
    }
    owner[i] = idx;
    ++count[idx + 1];
  }
  for (std::size_t c = 0; c < total; ++c) count[c + 1] += count[c];
  cell_start_ = count;
  cell_items_.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cell_items_[count[owner[i]]++] = static_cast<std::uint32_t>(i);
  }
}

WeightFamily WeightFamily::voronoi(BoundaryPointSet anchors, int dim) {
  return WeightFamily(WeightKind::voronoi, std::move(anchors), dim);
}

WeightFamily WeightFamily::idw(BoundaryPointSet anchors, int dim,
                               IdwParams params) {
  if (!(params.power > 0.0) || !(params.radius_factor > 0.0)) {
    throw InvalidInput("IDW power and radius factor must be positive");
  }
  WeightFamily fam(WeightKind::idw, std::move(anchors), dim);
  fam.idw_ = params;
  double const factor = std::min(params.radius_factor, kMaxIdwRadiusFactor);
  auto const& pts = fam.anchors_.points;
  fam.radii_.assign(pts.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) spacing = std::min(spacing, distance(pts[i], pts[j], dim));
    }
    if (!(spacing > 0.0)) {
      throw InvalidInput("IDW anchors " + std::to_string(i) + " coincide");
    }
    fam.radii_[i] = factor * spacing;
  }
  return fam;
}

std::size_t WeightFamily::nearest(const Point& x) const noexcept {
  auto const& pts = anchors_.points;
  std::array<int, 3> q{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    double const f = std::floor((x[k] - lo_[k]) / cell_);
    q[k] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(cells_[k] - 1)));
  }
  int max_ring = 0;
  for (int k = 0; k < dim_; ++k) {
    max_ring = std::max({max_ring, q[k], cells_[k] - 1 - q[k]});
  }
  std::size_t best = pts.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  auto scan_cell = [&](int cx, int cy, int cz) {
    std::size_t const idx =
        (static_cast<std::size_t>(cz) * static_cast<std::size_t>(cells_[1]) +
         static_cast<std::size_t>(cy)) *
            static_cast<std::size_t>(cells_[0]) +
        static_cast<std::size_t>(cx);
    for (std::uint32_t t = cell_start_[idx]; t < cell_start_[idx + 1]; ++t) {
      std::size_t const i = cell_items_[t];
      double d2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double const d = x[k] - pts[i][k];
        d2 += d * d;
      }
      if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
        best_d2 = d2;
        best = i;
      }
    }
  };
  for (int r = 0; r <= max_ring; ++r) {
    // Visit every cell at Chebyshev index distance exactly r.
    int const z_lo = dim_ == 3 ? std::max(0, q[2] - r) : 0;
    int const z_hi = dim_ == 3 ? std::min(cells_[2] - 1, q[2] + r) : 0;
    for (int cz = z_lo; cz <= z_hi; ++cz) {
      bool const z_edge = dim_ == 3 && std::abs(cz - q[2]) == r;
      for (int cy = std::max(0, q[1] - r); cy <= std::min(cells_[1] - 1, q[1] + r); ++cy) {
        bool const yz_edge = z_edge || std::abs(cy - q[1]) == r;
        if (yz_edge) {
          for (int cx = std::max(0, q[0] - r); cx <= std::min(cells_[0] - 1, q[0] + r); ++cx) {
            scan_cell(cx, cy, cz);
          }
        } else {
          if (q[0] - r >= 0) scan_cell(q[0] - r, cy, cz);
          if (r > 0 && q[0] + r < cells_[0]) scan_cell(q[0] + r, cy, cz);
        }
      }
    }
    // Cells in ring r + 1 are at least r * cell_ away.
    double const reach = static_cast<double>(r) * cell_;
    if (best < pts.size() && best_d2 < reach * reach) break;
  }
  return best;
}

std::vector<double> WeightFamily::eval(const Point& x, bool* fallback) const {
  std::vector<double> w(size(), 0.0);
  if (fallback) *fallback = false;
  if (kind_ == WeightKind::voronoi) {
    w[nearest(x)] = 1.0;
    return w;
  }
  auto const& pts = anchors_.points;
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double const d = distance(x, pts[i], dim_);
    double const r = radii_[i];
    if (d <= 1e-14 * r) {
      std::fill(w.begin(), w.end(), 0.0);
      w[i] = 1.0;
      return w;
    }
    if (d < r) {
      w[i] = std::pow((r - d) / (r * d), idw_.power);
      total += w[i];
    }
  }
  if (!(total > 0.0)) {
    if (fallback) *fallback = true;
    std::fill(w.begin(), w.end(), 0.0);
    w[nearest(x)] = 1.0;
    return w;
  }
  for (double& v : w) v /= total;
  return w;
}

double WeightFamily::interpolate(std::span<const double> nodal,
                                 const Point& x) const {
  if (nodal.size() != size()) {
    throw InvalidInput("nodal value count does not match anchor count");
  }
  if (kind_ == WeightKind::voronoi) return nodal[nearest(x)];
  std::vector<double> w = eval(x);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * nodal[i];
  return s;
}

bool WeightFamily::accumulate(const Point& x,
                              std::span<std::uint64_t> units) const {
  if (kind_ == WeightKind::voronoi) {
    units[nearest(x)] += kUnitsPerWalk;
    return false;
  }
  bool fallback = false;
  std::vector<double> w = eval(x, &fallback);
  std::uint64_t given = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    auto const q = static_cast<std::uint64_t>(
        std::floor(w[i] * static_cast<double>(kUnitsPerWalk)));
    units[i] += q;
    given += q;
    if (w[i] > w[largest]) largest = i;
  }
  units[largest] += kUnitsPerWalk - given;
  return fallback;
}

namespace {

// Uniform circle anchors (angles 2*pi*k/M from 0) whose Voronoi cells cover
// exactly their own circle get the analytic cell measure.
bool analytic_circle(const WeightFamily& fam, const Domain& dom,
                     std::size_t component, std::span<const std::size_t> ids) {
  if (dom.dim() != 2) return false;
  Shape const& s = dom.component_shape(component);
  if (s.kind != Shape::Kind::ball) return false;
  auto const& a = fam.anchors();
  std::size_t const m = ids.size();
  double const md = static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (a.params[ids[k]] != 2.0 * std::numbers::pi * static_cast<double>(k) / md) {
      return false;
    }
  }
  double const step = 2.0 * std::numbers::pi / md;
  // Any point of the circle is within this chord of an own anchor.
  double const reach = 2.0 * s.size * std::sin(0.5 * step);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a.component_ids[j] == component) continue;
    double const off = std::abs(distance(a.points[j], s.center, 2) - s.size);
    if (!(off > reach)) return false;
  }
  return true;
}

}  // namespace

std::vector<double> cell_measures(const WeightFamily& fam, const Domain& dom,
                                  std::size_t oversample) {
  if (fam.dim() != dom.dim()) {
    throw InvalidInput("weight family and domain dimensions differ");
  }
  oversample = std::max<std::size_t>(oversample, 100);
  auto const& a = fam.anchors();
  std::set<std::size_t> components(a.component_ids.begin(),
                                   a.component_ids.end());
  std::vector<double> sigma(fam.size(), 0.0);
  for (std::size_t c : components) {
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.component_ids[j] == c) ids.push_back(j);
    }
    if (fam.kind() == WeightKind::voronoi && analytic_circle(fam, dom, c, ids)) {
      double const cell = dom.surface_measure(c) / static_cast<double>(ids.size());
      for (std::size_t j : ids) sigma[j] += cell;
      continue;
    }
    SurfaceQuadrature const q = shape_quadrature(
        dom.component_shape(c), dom.dim(), oversample * ids.size());
    for (std::size_t s = 0; s < q.points.size(); ++s) {
      if (fam.kind() == WeightKind::voronoi) {
        sigma[fam.nearest(q.points[s])] += q.weights[s];
      } else {
        std::vector<double> w = fam.eval(q.points[s]);
        for (std::size_t j = 0; j < w.size(); ++j) sigma[j] += w[j] * q.weights[s];
      }
    }
  }
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (!(sigma[j] > 0.0)) {
      throw ConfigError("boundary cell of anchor " + std::to_string(j) +
                        " has zero surface measure");
    }
  }
  return sigma;
}

}  // namespace mcrem
