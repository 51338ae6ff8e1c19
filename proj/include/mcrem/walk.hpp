#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcrem/conductivity.hpp"
#include "mcrem/geometry.hpp"
#include "mcrem/rng.hpp"

namespace mcrem {

struct WalkConfig {
  double eps = 1e-6;
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t seed = 0;

  /// Throws InvalidInput unless eps > 0 and max_steps >= 1.
  void validate() const;
};

struct ExitSample {
  Point exit_point{0, 0, 0};
  std::size_t component = 0;
  Part part = Part::gamma0;
  std::uint64_t steps = 0;
};

/// Uniform direction on S^{d-1}: normalized gaussians in 3D, a uniform angle
/// (the same law as a normalized gaussian pair) in 2D.
Point sample_unit_sphere(int dim, WalkRng& rng) noexcept;

/// Walk-on-ellipsoids chain from x until it enters the eps-shell.
/// Throws WalkBudgetError (tagged with the stream's pole and replicate) when
/// cfg.max_steps is exceeded.
ExitSample run_walk(const Domain& dom, const ConductivityTensor& k,
                    const Point& x, const WalkConfig& cfg, WalkRng& rng);

struct StepProfileEntry {
  double eps = 0.0;
  double mean_steps = 0.0;
  double std_error = 0.0;
};

/// Mean WoE step count from x for each eps, using n walks per eps.
std::vector<StepProfileEntry> mean_steps_profile(
    const Domain& dom, const ConductivityTensor& k, const Point& x,
    std::span<const double> eps_list, std::uint64_t n, std::uint64_t seed);

struct CauchyTrace {
  Point x0{0, 0, 0};
  double u0 = 0.0;
  /// Conormal flux (K grad u) . n at x0 for the unnormalized K.
  double q0 = 0.0;
  double h = 0.0;
};

struct CauchyPoint {
  Point x_d{0, 0, 0};
  double u_d = 0.0;
};

/// First-order Taylor step x_D = x0 - h K n, u_D = u0 - h q0, where K is the
/// unnormalized tensor the flux was measured with. Throws GeometryError if
/// x_D is not inside dom.
CauchyPoint extrapolate_cauchy(const CauchyTrace& trace,
                               const ConductivityTensor& k, const Point& normal,
                               const Domain& dom);

}  // namespace mcrem
