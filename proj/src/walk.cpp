#include "mcrem/walk.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "mcrem/error.hpp"

namespace mcrem {

void WalkConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("walk eps must be a positive finite number");
  }
  if (max_steps < 1) throw InvalidInput("walk max_steps must be at least 1");
}

Point sample_unit_sphere(int dim, WalkRng& rng) noexcept {
  if (dim == 2) {
    // A normalized Box-Muller pair is (cos t, sin t); the radius cancels.
    double const t = 2.0 * std::numbers::pi * rng.uniform();
    return {std::cos(t), std::sin(t), 0.0};
  }
  Point u{0, 0, 0};
  double len2 = 0.0;
  do {
    len2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      u[k] = rng.gaussian();
      len2 += u[k] * u[k];
    }
  } while (len2 == 0.0);
  double const inv = 1.0 / std::sqrt(len2);
  for (int k = 0; k < dim; ++k) u[k] *= inv;
  return u;
}

ExitSample run_walk(const Domain& dom, const ConductivityTensor& k,
                    const Point& x, const WalkConfig& cfg, WalkRng& rng) {
  int const dim = dom.dim();
  Point pos = x;
  double d = dom.dist_to_boundary(pos);
  std::uint64_t steps = 0;
  while (d > cfg.eps) {
    if (steps == cfg.max_steps) {
      throw WalkBudgetError("walk exceeded " + std::to_string(cfg.max_steps) +
                                " steps (pole " + std::to_string(rng.pole()) +
                                ", replicate " +
                                std::to_string(rng.replicate()) + ")",
                            rng.pole(), rng.replicate());
    }
    Point const step = k.apply_sqrt(sample_unit_sphere(dim, rng));
    for (int c = 0; c < dim; ++c) pos[c] += d * step[c];
    d = dom.dist_to_boundary(pos);
    assert(d >= -1e-12 && "walk left the closed domain");
    ++steps;
  }
  ShellClassification const shell = dom.classify_shell(pos, cfg.eps);
  return {pos, shell.component, shell.part, steps};
}

std::vector<StepProfileEntry> mean_steps_profile(
    const Domain& dom, const ConductivityTensor& k, const Point& x,
    std::span<const double> eps_list, std::uint64_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("step profile needs at least two walks");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw InvalidInput("step profile eps list must be decreasing");
    }
  }
  std::vector<StepProfileEntry> out;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    WalkConfig cfg;
    cfg.eps = eps_list[e];
    cfg.seed = seed;
    cfg.validate();
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::uint64_t w = 0; w < n; ++w) {
      WalkRng rng(seed, static_cast<std::uint32_t>(e), w);
      auto const s = static_cast<double>(run_walk(dom, k, x, cfg, rng).steps);
      sum += s;
      sum2 += s * s;
    }
    double const nd = static_cast<double>(n);
    double const mean = sum / nd;
    double const var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
    out.push_back({cfg.eps, mean, std::sqrt(var / nd)});
  }
  return out;
}

CauchyPoint extrapolate_cauchy(const CauchyTrace& trace,
                               const ConductivityTensor& k, const Point& normal,
                               const Domain& dom) {
  if (!(trace.h > 0.0)) throw InvalidInput("Cauchy step h must be positive");
  int const dim = k.dim();
  if (dim != dom.dim()) {
    throw InvalidInput("conductivity and domain dimensions differ");
  }
  double const s = k.lambda_max_original();
  CauchyPoint out;
  out.x_d = trace.x0;
  for (int i = 0; i < dim; ++i) {
    double kn = 0.0;
    for (int j = 0; j < dim; ++j) kn += s * k.k()(i, j) * normal[j];
    out.x_d[i] -= trace.h * kn;
  }
  if (!dom.contains(out.x_d)) {
    throw GeometryError("extrapolated point lies outside the domain");
  }
  out.u_d = trace.u0 - trace.h * trace.q0;
  return out;
}

}  // namespace mcrem
