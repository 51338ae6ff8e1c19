#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcrem/conductivity.hpp"
#include "mcrem/estimator.hpp"
#include "mcrem/geometry.hpp"
#include "mcrem/linalg.hpp"
#include "mcrem/tsvd.hpp"

namespace mcrem::bench {

enum class SolutionId { sol2d_1, sol2d_2, sol2d_3, sol2d_4, sol3d_1, sol3d_2, sol3d_3 };

/// The anisotropic tensor K11 = 1, K12 = K21 = 0.3, K22 = 0.4 (unnormalized).
linalg::DenseMatrix anisotropic_k();

class ExactSolution {
 public:
  static ExactSolution get(SolutionId id);
  /// Throws ConfigError for an unknown name.
  static ExactSolution get(std::string_view name);
  static std::span<const SolutionId> all();

  SolutionId id() const noexcept { return id_; }
  std::string_view name() const noexcept;
  int dim() const noexcept;
  /// True if the solution needs the anisotropic tensor rather than I.
  bool anisotropic() const noexcept { return id_ == SolutionId::sol2d_4; }
  /// False for the quadratic-cubic pair whose Laplacian is 1.5 (x2 - 1).
  bool harmonic() const noexcept;

  double value(const Point& x) const noexcept;
  Point gradient(const Point& x) const noexcept;

 private:
  explicit ExactSolution(SolutionId id) : id_(id) {}
  SolutionId id_;
};

/// Boundary point budget on one component.
struct ComponentCount {
  std::size_t component;
  std::size_t count;
};

struct ExampleConfig {
  std::string id;
  int dim = 2;
  Shape outer;
  std::vector<Shape> holes;
  std::vector<Part> parts;
  std::vector<ComponentCount> gamma0;  // concatenated in order
  std::vector<ComponentCount> gamma1;  // concatenated in order
  Shape gamma_d;  // virtual measurement locus
  std::size_t m_d = 0;
  std::uint64_t n_paper = 0;
  std::uint64_t n_desk = 0;
  double eps = 1e-10;

  std::size_t m0() const noexcept;
  std::size_t m1() const noexcept;
  Domain domain() const;
};

/// Ids "ex5_1" ... "ex5_7".
std::vector<std::string> example_ids();
/// Throws ConfigError for an unknown id.
ExampleConfig example(std::string_view id);

/// Concrete point sets for an example.
struct ExampleSetup {
  Domain domain;
  BoundaryPointSet x1;
  BoundaryPointSet x0;
  BoundaryPointSet xd;
};

ExampleSetup build_setup(const ExampleConfig& cfg);

/// u^0 = u(x^0), u^D = u(x^D), nu_i = 1/sqrt(M_D). Throws ConfigError when
/// the solution's tensor (normalized) differs from k.
MeasurementSet synthesize_measurements(const ExampleSetup& setup,
                                       const ExactSolution& sol,
                                       const ConductivityTensor& k);

std::vector<double> boundary_truth(const ExampleSetup& setup,
                                   const ExactSolution& sol);

struct ReconstructionError {
  double l2 = 0.0;  // relative, or absolute when `absolute` is set
  double linf = 0.0;
  bool absolute = false;
};

/// L2 uses the sigma-weighted discrete inner product on Gamma1.
ReconstructionError reconstruction_error(std::span<const double> truth,
                                         std::span<const double> solution,
                                         std::span<const double> sigma);
std::vector<ReconstructionError> reconstruction_error(
    std::span<const double> truth, const TsvdFamily& family,
    std::span<const double> sigma);

/// Poisson kernel of the unit ball in dimension dim, density w.r.t. the
/// surface measure: (1 - |x|^2) / (|S^{d-1}| |x - y|^d).
double poisson_kernel_oracle(const Point& x, const Point& y, int dim);

/// Probability that Brownian motion started at radius rho in the annulus
/// r1 < |x| < r0 first hits the inner circle.
double annulus_hit_oracle(double r0, double r1, double rho);

}  // namespace mcrem::bench
