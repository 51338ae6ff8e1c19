#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mcrem {

/// Points are stored in 3D; for 2D domains the third coordinate is zero.
using Point = std::array<double, 3>;

inline double norm(const Point& a, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += a[k] * a[k];
  return std::sqrt(s);
}

inline double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    double const d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Boundary part a component belongs to: accessible (Γ0) or inaccessible (Γ1).
enum class Part { gamma0, gamma1 };

/// An axis-aligned cube [c - h, c + h]^d or a ball B(c, R).
struct Shape {
  enum class Kind { box, ball };
  Kind kind = Kind::ball;
  Point center{0, 0, 0};
  double size = 1.0;  // half-width for a box, radius for a ball

  static Shape box(double half, Point center = {0, 0, 0}) {
    return {Kind::box, center, half};
  }
  static Shape ball(Point center, double radius) {
    return {Kind::ball, center, radius};
  }
};

/// Measures a circle/sphere or square/cube boundary in dimension dim.
double shape_measure(const Shape& s, int dim);

struct BoundaryPointSet {
  std::vector<Point> points;
  std::vector<std::size_t> component_ids;
  /// Angle on circles, arc length on squares, polar angle on spheres.
  std::vector<double> params;

  std::size_t size() const noexcept { return points.size(); }
  void append(const BoundaryPointSet& other);
};

struct ShellClassification {
  bool on_shell = false;
  std::size_t component = 0;
  Part part = Part::gamma0;
  Point projected{0, 0, 0};
  /// Two components were equidistant to 1e-14; the lowest index won.
  bool tie = false;
};

/// Surface quadrature: sample points with their local surface elements.
struct SurfaceQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Outer shape minus disjoint balls. Component 0 is the outer boundary and
/// components 1..H are the holes in the order given.
class Domain {
 public:
  Domain(int dim, Shape outer, std::vector<Shape> holes,
         std::vector<Part> parts);

  int dim() const noexcept { return dim_; }
  const Shape& outer() const noexcept { return outer_; }
  std::span<const Shape> holes() const noexcept { return holes_; }
  std::size_t num_components() const noexcept { return holes_.size() + 1; }
  const Shape& component_shape(std::size_t id) const;
  Part part(std::size_t id) const { return parts_.at(id); }
  std::vector<std::size_t> components_of(Part p) const;

  /// Signed distance to one component, positive inside the domain.
  double component_distance(std::size_t id, const Point& x) const;
  /// Signed Euclidean distance to the whole boundary.
  double dist_to_boundary(const Point& x) const;
  /// Nearest point of component id to x.
  Point project(std::size_t id, const Point& x) const;
  ShellClassification classify_shell(const Point& x, double eps) const;

  bool contains(const Point& x) const { return dist_to_boundary(x) > 0.0; }
  double surface_measure(std::size_t id) const;
  double surface_measure(Part p) const;
  /// Smallest distance between two distinct boundary components.
  double min_component_gap() const;

 private:
  int dim_;
  Shape outer_;
  std::vector<Shape> holes_;
  std::vector<Part> parts_;
};

/// Uniform points on a shape in dimension dim. Circles: angles 2πk/M from 0,
/// counterclockwise. Squares: equal arc length counterclockwise from the
/// bottom-right corner. Spheres: Bauer spiral.
BoundaryPointSet shape_points(const Shape& s, int dim, std::size_t m,
                              std::size_t component_id = 0);

BoundaryPointSet boundary_points(const Domain& dom, std::size_t component,
                                 std::size_t m);

/// Dense midpoint-type rule with q samples of equal surface element.
SurfaceQuadrature shape_quadrature(const Shape& s, int dim, std::size_t q);

/// Position k (1-based) of the n-point Bauer spiral on the unit sphere.
Point bauer_point(std::size_t k, std::size_t n);

}  // namespace mcrem
