#include "mcrem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mcrem/error.hpp"

namespace mcrem {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieTol = 1e-14;

void require_dim(int dim) {
  if (dim != 2 && dim != 3) throw GeometryError("dimension must be 2 or 3");
}

// Point on the square boundary at arc length s, counterclockwise from the
// bottom-right corner.
Point square_at(const Shape& s, double arc) {
  double const a = s.size;
  double const side = 2.0 * a;
  Point p = s.center;
  int const edge = std::min(3, static_cast<int>(arc / side));
  double const t = arc - edge * side;
  switch (edge) {
    case 0: p[0] += a; p[1] += -a + t; break;
    case 1: p[0] += a - t; p[1] += a; break;
    case 2: p[0] += -a; p[1] += a - t; break;
    default: p[0] += -a + t; p[1] += -a; break;
  }
  return p;
}

}  // namespace

double shape_measure(const Shape& s, int dim) {
  require_dim(dim);
  if (s.kind == Shape::Kind::box) {
    return dim == 2 ? 8.0 * s.size : 24.0 * s.size * s.size;
  }
  return dim == 2 ? kTwoPi * s.size
                  : 2.0 * kTwoPi * s.size * s.size;
}

void BoundaryPointSet::append(const BoundaryPointSet& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  component_ids.insert(component_ids.end(), other.component_ids.begin(),
                       other.component_ids.end());
  params.insert(params.end(), other.params.begin(), other.params.end());
}

Domain::Domain(int dim, Shape outer, std::vector<Shape> holes,
               std::vector<Part> parts)
    : dim_(dim), outer_(outer), holes_(std::move(holes)), parts_(std::move(parts)) {
  require_dim(dim_);
  if (parts_.size() != holes_.size() + 1) {
    throw GeometryError("one boundary part label is required per component");
  }
  if (!(outer_.size > 0.0)) throw GeometryError("outer shape has no extent");
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    Shape const& h = holes_[i];
    if (h.kind != Shape::Kind::ball || !(h.size > 0.0)) {
      throw GeometryError("hole " + std::to_string(i + 1) +
                          " must be a ball of positive radius");
    }
    if (!(component_distance(0, h.center) > h.size)) {
      throw GeometryError("hole " + std::to_string(i + 1) +
                          " is not strictly inside the outer shape");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!(distance(h.center, holes_[j].center, dim_) >
            h.size + holes_[j].size)) {
        throw GeometryError("holes " + std::to_string(j + 1) + " and " +
                            std::to_string(i + 1) + " overlap");
      }
    }
  }
}

const Shape& Domain::component_shape(std::size_t id) const {
  if (id == 0) return outer_;
  if (id > holes_.size()) throw GeometryError("no such boundary component");
  return holes_[id - 1];
}

std::vector<std::size_t> Domain::components_of(Part p) const {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] == p) ids.push_back(i);
  }
  return ids;
}

double Domain::component_distance(std::size_t id, const Point& x) const {
  if (id == 0) {
    if (outer_.kind == Shape::Kind::box) {
      double d = outer_.size - std::abs(x[0] - outer_.center[0]);
      for (int k = 1; k < dim_; ++k) {
        d = std::min(d, outer_.size - std::abs(x[k] - outer_.center[k]));
      }
      return d;
    }
    return outer_.size - distance(x, outer_.center, dim_);
  }
  Shape const& h = holes_[id - 1];
  return distance(x, h.center, dim_) - h.size;
}

double Domain::dist_to_boundary(const Point& x) const {
  double d = component_distance(0, x);
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    d = std::min(d, distance(x, holes_[i].center, dim_) - holes_[i].size);
  }
  return d;
}

Point Domain::project(std::size_t id, const Point& x) const {
  Shape const& s = component_shape(id);
  Point p = x;
  if (s.kind == Shape::Kind::box) {
    bool inside = true;
    for (int k = 0; k < dim_; ++k) {
      inside = inside && std::abs(x[k] - s.center[k]) <= s.size;
    }
    if (!inside) {
      for (int k = 0; k < dim_; ++k) {
        p[k] = std::clamp(x[k], s.center[k] - s.size, s.center[k] + s.size);
      }
      return p;
    }
    int axis = 0;
    for (int k = 1; k < dim_; ++k) {
      if (std::abs(x[k] - s.center[k]) > std::abs(x[axis] - s.center[axis])) {
        axis = k;
      }
    }
    double const side = x[axis] - s.center[axis] < 0.0 ? -1.0 : 1.0;
    p[axis] = s.center[axis] + side * s.size;
    return p;
  }
  double const r = distance(x, s.center, dim_);
  if (r == 0.0) {
    p = s.center;
    p[0] += s.size;
    return p;
  }
  for (int k = 0; k < dim_; ++k) {
    p[k] = s.center[k] + s.size * (x[k] - s.center[k]) / r;
  }
  return p;
}

ShellClassification Domain::classify_shell(const Point& x, double eps) const {
  std::size_t const n = num_components();
  double dmin = component_distance(0, x);
  for (std::size_t i = 1; i < n; ++i) {
    dmin = std::min(dmin, component_distance(i, x));
  }
  ShellClassification out;
  out.on_shell = dmin <= eps;
  int matches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (component_distance(i, x) <= dmin + kTieTol) {
      if (matches++ == 0) out.component = i;
    }
  }
  out.tie = matches > 1;
  out.part = parts_[out.component];
  out.projected = project(out.component, x);
  return out;
}

double Domain::surface_measure(std::size_t id) const {
  return shape_measure(component_shape(id), dim_);
}

double Domain::surface_measure(Part p) const {
  double total = 0.0;
  for (std::size_t id : components_of(p)) total += surface_measure(id);
  return total;
}

double Domain::min_component_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    gap = std::min(gap, component_distance(0, holes_[i].center) - holes_[i].size);
    for (std::size_t j = 0; j < i; ++j) {
      gap = std::min(gap, distance(holes_[i].center, holes_[j].center, dim_) -
                              holes_[i].size - holes_[j].size);
    }
  }
  return gap;
}

Point bauer_point(std::size_t k, std::size_t n) {
  double const nd = static_cast<double>(n);
  double const phi = std::acos(1.0 - (2.0 * static_cast<double>(k) - 1.0) / nd);
  double const theta = std::sqrt(nd * std::numbers::pi) * phi;
  return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta),
          std::cos(phi)};
}

BoundaryPointSet shape_points(const Shape& s, int dim, std::size_t m,
                              std::size_t component_id) {
  require_dim(dim);
  if (m == 0) throw InvalidInput("boundary point count must be at least 1");
  BoundaryPointSet out;
  out.points.reserve(m);
  out.component_ids.assign(m, component_id);
  out.params.reserve(m);
  double const md = static_cast<double>(m);
  if (s.kind == Shape::Kind::box) {
    if (dim != 2) throw GeometryError("cube boundary points are not supported");
    double const perimeter = 8.0 * s.size;
    for (std::size_t k = 0; k < m; ++k) {
      double const arc = perimeter * static_cast<double>(k) / md;
      out.points.push_back(square_at(s, arc));
      out.params.push_back(arc);
    }
    return out;
  }
  if (dim == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      double const angle = kTwoPi * static_cast<double>(k) / md;
      out.points.push_back({s.center[0] + s.size * std::cos(angle),
                            s.center[1] + s.size * std::sin(angle), 0.0});
      out.params.push_back(angle);
    }
    return out;
  }
  for (std::size_t k = 1; k <= m; ++k) {
    Point u = bauer_point(k, m);
    Point p;
    for (int c = 0; c < 3; ++c) p[c] = s.center[c] + s.size * u[c];
    out.points.push_back(p);
    out.params.push_back(std::acos(u[2]));
  }
  return out;
}

BoundaryPointSet boundary_points(const Domain& dom, std::size_t component,
                                 std::size_t m) {
  return shape_points(dom.component_shape(component), dom.dim(), m, component);
}

SurfaceQuadrature shape_quadrature(const Shape& s, int dim, std::size_t q) {
  require_dim(dim);
  if (q == 0) throw InvalidInput("quadrature size must be at least 1");
  SurfaceQuadrature out;
  out.points.reserve(q);
  double const qd = static_cast<double>(q);
  out.weights.assign(q, shape_measure(s, dim) / qd);
  if (s.kind == Shape::Kind::box) {
    if (dim != 2) throw GeometryError("cube quadrature is not supported");
    double const perimeter = 8.0 * s.size;
    for (std::size_t k = 0; k < q; ++k) {
      out.points.push_back(
          square_at(s, perimeter * (static_cast<double>(k) + 0.5) / qd));
    }
    return out;
  }
  if (dim == 2) {
    for (std::size_t k = 0; k < q; ++k) {
      double const angle = kTwoPi * (static_cast<double>(k) + 0.5) / qd;
      out.points.push_back({s.center[0] + s.size * std::cos(angle),
                            s.center[1] + s.size * std::sin(angle), 0.0});
    }
    return out;
  }
  for (std::size_t k = 1; k <= q; ++k) {
    Point u = bauer_point(k, q);
    Point p;
    for (int c = 0; c < 3; ++c) p[c] = s.center[c] + s.size * u[c];
    out.points.push_back(p);
  }
  return out;
}

}  // namespace mcrem
