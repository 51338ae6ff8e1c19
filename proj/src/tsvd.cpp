#include "mcrem/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcrem/error.hpp"
#include "mcrem/rng.hpp"

namespace mcrem {
namespace {

std::vector<double> rhs_nu(const EstimatorBundle& b, const MeasurementSet& meas) {
  std::size_t const md = b.a1.rows();
  if (meas.num_interior() != md || meas.num_boundary() != b.a0.cols()) {
    throw InvalidInput("measurements do not match the bundle dimensions");
  }
  std::vector<double> rhs(md);
  std::vector<double> const a0u0 =
      b.a0.cols() ? b.a0 * std::span<const double>(meas.boundary_values)
                  : std::vector<double>(md, 0.0);
  for (std::size_t i = 0; i < md; ++i) {
    rhs[i] = b.nu[i] * (meas.interior_values[i] - a0u0[i]);
  }
  return rhs;
}

std::vector<double> inv_sqrt(std::span<const double> sigma) {
  std::vector<double> out(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k) out[k] = 1.0 / std::sqrt(sigma[k]);
  return out;
}

// Gamma1 trace  t_k = sum_i c_i A1_ik / sigma_k.
std::vector<double> density_trace(const EstimatorBundle& b,
                                  std::span<const double> c) {
  std::vector<double> t = transpose_times(b.a1, c);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] /= b.sigma1[k];
  return t;
}

}  // namespace

SpectralSolution spectrum(const EstimatorBundle& bundle, SpectrumOptions opts) {
  linalg::SymEig eig = linalg::sym_eig(bundle.lambda_nu);
  std::size_t const md = eig.values.size();
  if (md == 0 || !(eig.values[0] > 0.0)) {
    throw RankError("Lambda^nu has no positive eigenvalue", 0);
  }
  SpectralSolution s;
  s.eigenvalues = eig.values;
  s.eigenvectors = std::move(eig.vectors);
  s.gaps.resize(md);
  for (std::size_t j = 0; j < md; ++j) {
    s.gaps[j] = s.eigenvalues[j] - (j + 1 < md ? s.eigenvalues[j + 1] : 0.0);
  }
  double const floor = opts.min_relative * s.eigenvalues[0];
  std::size_t count = 0;
  while (count < std::min(opts.max_traces, md) &&
         s.eigenvalues[count] >= floor && s.eigenvalues[count] > 0.0) {
    ++count;
  }
  s.traces = linalg::DenseMatrix(count, bundle.a1.cols());
  std::vector<double> c(md);
  for (std::size_t j = 0; j < count; ++j) {
    double const scale = 1.0 / std::sqrt(s.eigenvalues[j]);
    for (std::size_t i = 0; i < md; ++i) {
      c[i] = scale * bundle.nu[i] * s.eigenvectors(i, j);
    }
    std::vector<double> const t = density_trace(bundle, c);
    std::copy(t.begin(), t.end(), s.traces.row(j).begin());
  }
  return s;
}

TsvdFamily tsvd_family(const EstimatorBundle& bundle,
                       const MeasurementSet& meas,
                       std::span<const std::size_t> r_values) {
  if (r_values.empty()) throw InvalidInput("r list must not be empty");
  std::size_t const md = bundle.a1.rows();
  std::size_t const m1 = bundle.a1.cols();
  std::vector<double> const scale = inv_sqrt(bundle.sigma1);
  linalg::DenseMatrix const b = linalg::scale_rows_cols(bundle.a1, bundle.nu, scale);
  linalg::Svd const factors = linalg::svd(b);

  TsvdFamily fam;
  fam.r_values.assign(r_values.begin(), r_values.end());
  fam.rhs = rhs_nu(bundle, meas);
  fam.solutions = linalg::DenseMatrix(r_values.size(), m1);
  fam.interior_fit = linalg::DenseMatrix(r_values.size(), md);
  fam.residuals = linalg::DenseMatrix(r_values.size(), md);
  std::vector<double> const a0u0 =
      bundle.a0.cols() ? bundle.a0 * std::span<const double>(meas.boundary_values)
                       : std::vector<double>(md, 0.0);
  double const lambda1 = factors.sigma[0] * factors.sigma[0];

  for (std::size_t n = 0; n < r_values.size(); ++n) {
    std::size_t const r = r_values[n];
    linalg::TruncatedPseudoInverse const pinv =
        linalg::tsvd_pinv(factors, b.rows(), b.cols(), r);
    std::vector<double> u = pinv.apply(fam.rhs);
    for (std::size_t k = 0; k < m1; ++k) u[k] *= scale[k];
    std::copy(u.begin(), u.end(), fam.solutions.row(n).begin());

    std::vector<double> const fit = bundle.a1 * std::span<const double>(u);
    for (std::size_t i = 0; i < md; ++i) {
      fam.interior_fit(n, i) = fit[i] + a0u0[i];
      fam.residuals(n, i) = std::abs(meas.interior_values[i] - fam.interior_fit(n, i));
    }
    double const lr = factors.sigma[r - 1] * factors.sigma[r - 1];
    double const next =
        r < factors.sigma.size() ? factors.sigma[r] * factors.sigma[r] : 0.0;
    fam.gap_warnings.push_back(pinv.gap_warning() || lr - next < 1e-3 * lambda1);
  }
  return fam;
}

std::vector<double> tsvd_density_form(const EstimatorBundle& bundle,
                                      const MeasurementSet& meas, std::size_t r) {
  linalg::SymEig const eig = linalg::sym_eig(bundle.lambda_nu);
  std::size_t const md = eig.values.size();
  if (r == 0 || r > md || !(eig.values[r - 1] > 0.0)) {
    throw RankError("density form: truncation " + std::to_string(r) +
                        " exceeds the positive spectrum",
                    0);
  }
  std::vector<double> const b = rhs_nu(bundle, meas);
  std::vector<double> u(md, 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    double proj = 0.0;
    for (std::size_t i = 0; i < md; ++i) proj += eig.vectors(i, j) * b[i];
    proj /= eig.values[j];
    for (std::size_t i = 0; i < md; ++i) u[i] += proj * eig.vectors(i, j);
  }
  for (std::size_t i = 0; i < md; ++i) u[i] *= bundle.nu[i];
  return density_trace(bundle, u);
}

DualFormCheck dual_form_check(const EstimatorBundle& bundle,
                              const MeasurementSet& meas, std::size_t r) {
  linalg::SymEig const eig = linalg::sym_eig(bundle.lambda_nu);
  std::size_t const md = eig.values.size();
  if (r == 0 || r > md) throw InvalidInput("dual form check: r out of range");
  double const next = r < md ? eig.values[r] : 0.0;
  DualFormCheck out;
  if (!(eig.values[r - 1] - next > 1e-6 * eig.values[0])) {
    out.skipped = true;
    return out;
  }
  std::size_t const rs[] = {r};
  TsvdFamily const fam = tsvd_family(bundle, meas, rs);
  std::vector<double> const dens = tsvd_density_form(bundle, meas, r);
  for (std::size_t k = 0; k < dens.size(); ++k) {
    double const m = fam.solutions(0, k);
    out.scale = std::max(out.scale, std::abs(m));
    out.discrepancy = std::max(out.discrepancy, std::abs(m - dens[k]));
  }
  return out;
}

void add_uniform_noise(std::span<double> values, double delta,
                       std::uint64_t seed) {
  if (!(delta >= 0.0)) throw InvalidInput("noise amplitude must be nonnegative");
  if (delta == 0.0) return;
  WalkRng rng(seed, 0xFFFFFFFFu, 0);
  for (double& v : values) v += delta * (2.0 * rng.uniform() - 1.0);
}

}  // namespace mcrem
