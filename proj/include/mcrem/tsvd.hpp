#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcrem/estimator.hpp"
#include "mcrem/linalg.hpp"

namespace mcrem {

struct SpectralSolution {
  std::vector<double> eigenvalues;  // descending
  linalg::DenseMatrix eigenvectors;  // M_D x M_D, column j pairs with lambda_j
  std::vector<double> gaps;  // lambda_j - lambda_{j+1}; last entry is lambda_last
  /// Row j holds the Gamma1 trace of the j-th eigenfunction at the anchors.
  linalg::DenseMatrix traces;
};

struct SpectrumOptions {
  /// Traces are computed for at most this many leading eigenpairs ...
  std::size_t max_traces = 15;
  /// ... and only for lambda_j >= min_relative * lambda_1.
  double min_relative = 1e-6;
};

/// Eigenpairs of Lambda^nu and eigenfunction traces
/// u_j(x_k) = lambda_j^{-1/2} sum_i nu_i U_ij A1_ik / sigma_k.
/// Throws RankError when Lambda^nu has no positive eigenvalue.
SpectralSolution spectrum(const EstimatorBundle& bundle,
                          SpectrumOptions opts = {});

struct TsvdFamily {
  std::vector<std::size_t> r_values;
  linalg::DenseMatrix solutions;     // |r| x M_1, u^(r) at the anchors
  linalg::DenseMatrix interior_fit;  // |r| x M_D
  linalg::DenseMatrix residuals;     // |r| x M_D, |u^D - fit|
  /// lambda_r - lambda_{r+1} < 1e-3 lambda_1 at this truncation.
  std::vector<bool> gap_warnings;
  std::vector<double> rhs;  // b^nu = diag(nu)(u^D - A0 u^0)
};

/// r-TSVD reconstructions of the Gamma1 data in matrix form:
/// u^(r) = diag(sigma)^{-1/2} (diag(nu) A1 diag(sigma)^{-1/2})^+_r b^nu.
/// Throws RankError if some r exceeds the numerical rank.
TsvdFamily tsvd_family(const EstimatorBundle& bundle,
                       const MeasurementSet& meas,
                       std::span<const std::size_t> r_values);

/// Same truncation computed in density form from the eigenpairs of
/// Lambda^nu: Gamma1 trace of sum_i nu_i [(Lambda^nu)^+_r b^nu]_i rho_i.
std::vector<double> tsvd_density_form(const EstimatorBundle& bundle,
                                      const MeasurementSet& meas, std::size_t r);

struct DualFormCheck {
  bool skipped = false;  // gap at r not above 1e-6 lambda_1
  double discrepancy = 0.0;  // max abs difference of the two traces
  double scale = 0.0;  // max abs of the matrix-form trace
};

DualFormCheck dual_form_check(const EstimatorBundle& bundle,
                              const MeasurementSet& meas, std::size_t r);

/// Adds independent uniform noise on [-delta, delta] to each value.
void add_uniform_noise(std::span<double> values, double delta,
                       std::uint64_t seed);

}  // namespace mcrem
