#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcrem/geometry.hpp"

namespace mcrem {

enum class WeightKind { voronoi, idw };

struct IdwParams {
  double power = 2.0;
  /// Support radius as a multiple of the nearest-anchor spacing. Clamped to
  /// kMaxIdwRadiusFactor so that omega_i(x_j) = delta_ij holds.
  double radius_factor = 2.0;
};

inline constexpr double kMaxIdwRadiusFactor = 0.99;

/// Fixed-point units credited per walk when accumulating weights.
inline constexpr std::uint64_t kUnitsPerWalk = std::uint64_t{1} << 32;

/// Partition of unity over a set of boundary anchors.
class WeightFamily {
 public:
  static WeightFamily voronoi(BoundaryPointSet anchors, int dim);
  static WeightFamily idw(BoundaryPointSet anchors, int dim, IdwParams params);

  WeightKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return anchors_.size(); }
  const BoundaryPointSet& anchors() const noexcept { return anchors_; }
  const IdwParams& idw_params() const noexcept { return idw_; }
  std::span<const double> radii() const noexcept { return radii_; }

  /// Nearest anchor, lowest index on ties.
  std::size_t nearest(const Point& x) const noexcept;

  /// Weight vector at x. For IDW, sets *fallback when no support covers x and
  /// the Voronoi indicator is returned instead.
  std::vector<double> eval(const Point& x, bool* fallback = nullptr) const;

  double interpolate(std::span<const double> nodal, const Point& x) const;

  /// Adds kUnitsPerWalk integer units to `units`, split by the weights at x.
  /// Rounding residue goes to the largest weight. Returns true on IDW fallback.
  bool accumulate(const Point& x, std::span<std::uint64_t> units) const;

 private:
  WeightFamily(WeightKind kind, BoundaryPointSet anchors, int dim);
  void build_grid();

  WeightKind kind_;
  BoundaryPointSet anchors_;
  int dim_;
  IdwParams idw_;
  std::vector<double> radii_;

  // Uniform bucket grid over the anchors for exact nearest-anchor queries.
  Point lo_{0, 0, 0};
  double cell_ = 1.0;
  std::array<int, 3> cells_{1, 1, 1};
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

/// sigma_j = integral of omega_j over the anchored components. Uniform circle
/// anchors whose Voronoi cells stay on their own circle get |circle|/M
/// exactly; everything else uses a dense equal-element quadrature with at
/// least `oversample` samples per anchor. Throws ConfigError on an empty cell.
std::vector<double> cell_measures(const WeightFamily& fam, const Domain& dom,
                                  std::size_t oversample = 200);

}  // namespace mcrem
