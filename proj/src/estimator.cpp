#include "mcrem/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mc_rem_kernel.hpp"
#include "mcrem/error.hpp"

namespace mcrem {

std::vector<double> MeasurementSet::uniform_nu(std::size_t m) {
  if (m == 0) throw InvalidInput("at least one interior measurement is required");
  return std::vector<double>(m, 1.0 / std::sqrt(static_cast<double>(m)));
}

void MeasurementSet::validate(const Domain& dom, double eps) const {
  std::size_t const md = interior_points.size();
  if (md == 0) throw InvalidInput("at least one interior measurement is required");
  if (interior_values.size() != md || nu.size() != md) {
    throw InvalidInput("interior points, values and nu differ in length");
  }
  if (boundary_values.size() != boundary_points.size()) {
    throw InvalidInput("Gamma0 points and values differ in length");
  }
  double sum2 = 0.0;
  for (std::size_t i = 0; i < md; ++i) {
    if (!(nu[i] > 0.0 && nu[i] <= 1.0)) {
      throw InvalidInput("nu[" + std::to_string(i) + "] is outside (0, 1]");
    }
    sum2 += nu[i] * nu[i];
    if (!std::isfinite(interior_values[i])) {
      throw InvalidInput("interior value " + std::to_string(i) + " is not finite");
    }
    if (!(dom.dist_to_boundary(interior_points[i]) > eps)) {
      throw InvalidInput("interior point " + std::to_string(i) +
                         " is not inside the domain beyond the eps-shell");
    }
  }
  if (std::abs(sum2 - 1.0) > 1e-12) {
    throw InvalidInput("nu must satisfy sum nu_i^2 = 1");
  }
  auto const gamma0 = dom.components_of(Part::gamma0);
  for (std::size_t i = 0; i < boundary_points.size(); ++i) {
    bool on = false;
    for (std::size_t c : gamma0) {
      on = on || std::abs(dom.component_distance(c, boundary_points[i])) <= 1e-9;
    }
    if (!on) {
      throw InvalidInput("Gamma0 point " + std::to_string(i) +
                         " does not lie on an accessible boundary component");
    }
    if (!std::isfinite(boundary_values[i])) {
      throw InvalidInput("Gamma0 value " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<double> EstimatorBundle::mu_gamma1() const {
  std::vector<double> mu(a1.rows(), 0.0);
  for (std::size_t i = 0; i < a1.rows(); ++i) {
    for (double v : a1.row(i)) mu[i] += v;
  }
  return mu;
}

linalg::DenseMatrix lambda_nu(const linalg::DenseMatrix& a1,
                              std::span<const double> sigma1,
                              std::span<const double> nu) {
  if (sigma1.size() != a1.cols() || nu.size() != a1.rows()) {
    throw InvalidInput("lambda_nu: shape mismatch");
  }
  std::size_t const md = a1.rows();
  linalg::DenseMatrix l(md, md);
  for (std::size_t i = 0; i < md; ++i) {
    for (std::size_t j = i; j < md; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a1.cols(); ++k) {
        s += a1(i, k) * a1(j, k) / sigma1[k];
      }
      s *= nu[i] * nu[j];
      l(i, j) = s;
      l(j, i) = s;
    }
  }
  return l;
}

DensityEstimate density(const EstimatorBundle& bundle, std::size_t pole) {
  if (pole >= bundle.a1.rows()) throw InvalidInput("pole index out of range");
  DensityEstimate d;
  d.pole_index = pole;
  d.values.resize(bundle.a1.cols());
  for (std::size_t j = 0; j < d.values.size(); ++j) {
    d.values[j] = bundle.a1(pole, j) / bundle.sigma1[j];
  }
  return d;
}

DensityEstimate averaged_density(const EstimatorBundle& bundle) {
  std::size_t const md = bundle.a1.rows();
  if (md == 0) throw InvalidInput("bundle has no poles");
  DensityEstimate avg;
  avg.values.assign(bundle.a1.cols(), 0.0);
  for (std::size_t i = 0; i < md; ++i) {
    DensityEstimate const d = density(bundle, i);
    for (std::size_t j = 0; j < d.values.size(); ++j) avg.values[j] += d.values[j];
  }
  for (double& v : avg.values) v /= static_cast<double>(md);
  return avg;
}

namespace detail {

void Tally::merge(const Tally& other) {
  for (std::size_t i = 0; i < units.size(); ++i) units[i] += other.units[i];
  for (std::size_t i = 0; i < steps_total.size(); ++i) {
    steps_total[i] += other.steps_total[i];
    steps_max[i] = std::max(steps_max[i], other.steps_max[i]);
  }
  fallbacks += other.fallbacks;
}

McRemContext make_context(const Domain& dom, const ConductivityTensor& k,
                          const MeasurementSet& meas, const WeightFamily& fam1,
                          const WeightFamily* fam0,
                          std::span<const double> sigma1, const WalkConfig& cfg,
                          std::uint64_t n) {
  cfg.validate();
  if (n < 1 || n >= (std::uint64_t{1} << 31)) {
    throw InvalidInput("walk count N must lie in [1, 2^31)");
  }
  if (k.dim() != dom.dim() || fam1.dim() != dom.dim()) {
    throw InvalidInput("domain, conductivity and weights differ in dimension");
  }
  if (sigma1.size() != fam1.size()) {
    throw InvalidInput("cell measure count does not match Gamma1 anchors");
  }
  meas.validate(dom, cfg.eps);
  if (meas.num_interior() > 0xFFFFFFFFu) throw InvalidInput("too many poles");
  std::size_t m0 = 0;
  if (fam0) {
    if (fam0->dim() != dom.dim()) throw InvalidInput("Gamma0 weights dimension");
    m0 = fam0->size();
  } else if (!dom.components_of(Part::gamma0).empty()) {
    throw InvalidInput("Gamma0 is nonempty but has no weight family");
  }
  return {dom, k, meas, fam1, fam0, cfg, n, fam1.size(), m0};
}

void walk_block(const McRemContext& ctx, std::size_t pole, std::uint64_t begin,
                std::uint64_t end, Tally& tally) {
  Point const x = ctx.meas.interior_points[pole];
  std::span<std::uint64_t> row(tally.units.data() + pole * ctx.width(),
                               ctx.width());
  std::span<std::uint64_t> row1 = row.subspan(0, ctx.m1);
  std::span<std::uint64_t> row0 = row.subspan(ctx.m1);
  for (std::uint64_t rep = begin; rep < end; ++rep) {
    WalkRng rng(ctx.cfg.seed, static_cast<std::uint32_t>(pole), rep);
    ExitSample const s = run_walk(ctx.dom, ctx.k, x, ctx.cfg, rng);
    bool fallback = false;
    if (s.part == Part::gamma1) {
      fallback = ctx.fam1.accumulate(s.exit_point, row1);
    } else {
      fallback = ctx.fam0->accumulate(s.exit_point, row0);
    }
    tally.fallbacks += fallback ? 1 : 0;
    tally.steps_total[pole] += s.steps;
    tally.steps_max[pole] = std::max(tally.steps_max[pole], s.steps);
  }
}

EstimatorBundle finalize(const McRemContext& ctx, const Tally& tally,
                         std::span<const double> sigma1) {
  std::size_t const md = ctx.meas.num_interior();
  EstimatorBundle b;
  b.a1 = linalg::DenseMatrix(md, ctx.m1);
  b.a0 = linalg::DenseMatrix(md, ctx.m0);
  double const denom =
      static_cast<double>(ctx.n) * static_cast<double>(kUnitsPerWalk);
  for (std::size_t i = 0; i < md; ++i) {
    std::uint64_t const* row = tally.units.data() + i * ctx.width();
    for (std::size_t j = 0; j < ctx.m1; ++j) {
      b.a1(i, j) = static_cast<double>(row[j]) / denom;
    }
    for (std::size_t j = 0; j < ctx.m0; ++j) {
      b.a0(i, j) = static_cast<double>(row[ctx.m1 + j]) / denom;
    }
  }
  b.sigma1.assign(sigma1.begin(), sigma1.end());
  b.nu = ctx.meas.nu;
  b.lambda_nu = lambda_nu(b.a1, b.sigma1, b.nu);
  b.n = ctx.n;
  b.eps = ctx.cfg.eps;
  b.seed = ctx.cfg.seed;
  b.steps.resize(md);
  for (std::size_t i = 0; i < md; ++i) {
    b.steps[i].total = tally.steps_total[i];
    b.steps[i].max = tally.steps_max[i];
    b.steps[i].mean =
        static_cast<double>(tally.steps_total[i]) / static_cast<double>(ctx.n);
  }
  b.idw_fallbacks = tally.fallbacks;
  return b;
}

}  // namespace detail
}  // namespace mcrem
