#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcrem/conductivity.hpp"
#include "mcrem/geometry.hpp"
#include "mcrem/linalg.hpp"
#include "mcrem/walk.hpp"
#include "mcrem/weights.hpp"

namespace mcrem {

/// Interior measurements (x^D, u^D, nu) and accessible-boundary data (x^0, u^0).
struct MeasurementSet {
  std::vector<Point> interior_points;
  std::vector<double> interior_values;
  std::vector<double> nu;
  std::vector<Point> boundary_points;
  std::vector<double> boundary_values;

  std::size_t num_interior() const noexcept { return interior_points.size(); }
  std::size_t num_boundary() const noexcept { return boundary_points.size(); }

  /// nu_i = 1 / sqrt(m).
  static std::vector<double> uniform_nu(std::size_t m);

  /// Throws InvalidInput on shape mismatch, nu outside (0, 1] or with
  /// sum of squares off 1 by more than 1e-12, interior points within eps of
  /// the boundary, or boundary points not on a Gamma0 component.
  void validate(const Domain& dom, double eps) const;
};

struct StepStats {
  double mean = 0.0;
  std::uint64_t max = 0;
  std::uint64_t total = 0;
};

struct EstimatorBundle {
  linalg::DenseMatrix a1;  // M_D x M_1
  linalg::DenseMatrix a0;  // M_D x M_0
  std::vector<double> sigma1;
  std::vector<double> nu;
  linalg::DenseMatrix lambda_nu;  // M_D x M_D
  std::uint64_t n = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::vector<StepStats> steps;  // per pole
  std::uint64_t idw_fallbacks = 0;

  /// Row sums of A1: estimated elliptic measure of Gamma1 from each pole.
  std::vector<double> mu_gamma1() const;
};

struct McRemOptions {
  /// Worker threads for the parallel assembly; 0 keeps the OpenMP default.
  int threads = 0;
  /// Walks per scheduled task.
  std::uint64_t block = 4096;
};

/// Walks N chains from every interior pole and credits each exit to one cell
/// of the Gamma1 family (fam1) or of the Gamma0 family (fam0, may be null
/// when Gamma0 is empty). Results are bit-identical for every thread count.
EstimatorBundle mc_rem(const Domain& dom, const ConductivityTensor& k,
                       const MeasurementSet& meas, const WeightFamily& fam1,
                       const WeightFamily* fam0, std::span<const double> sigma1,
                       const WalkConfig& cfg, std::uint64_t n,
                       McRemOptions opts = {});

/// Single-threaded reference assembly producing the same bundle.
EstimatorBundle mc_rem_serial(const Domain& dom, const ConductivityTensor& k,
                              const MeasurementSet& meas,
                              const WeightFamily& fam1, const WeightFamily* fam0,
                              std::span<const double> sigma1,
                              const WalkConfig& cfg, std::uint64_t n);

/// diag(nu) A1 diag(sigma)^{-1} A1^T diag(nu), exactly symmetric.
linalg::DenseMatrix lambda_nu(const linalg::DenseMatrix& a1,
                              std::span<const double> sigma1,
                              std::span<const double> nu);

struct DensityEstimate {
  std::size_t pole_index = 0;  // meaningless for averaged estimates
  std::vector<double> values;
};

/// rho_j = [A1]_ij / sigma_j.
DensityEstimate density(const EstimatorBundle& bundle, std::size_t pole);

/// Mean of the per-pole densities.
DensityEstimate averaged_density(const EstimatorBundle& bundle);

}  // namespace mcrem
