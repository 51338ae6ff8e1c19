#include "mcrem/bench_catalog.hpp"

#include <cmath>
#include <numbers>

#include "mcrem/error.hpp"

namespace mcrem::bench {
namespace {

constexpr double kK11 = 1.0;
constexpr double kK12 = 0.3;
constexpr double kK22 = 0.4;
constexpr double kA4 = (2.0 * kK12 - kK22) / (3.0 * kK11);
constexpr double kB4 = (2.0 * kK12 - kK11) / (3.0 * kK22);

constexpr std::array<SolutionId, 7> kAllSolutions = {
    SolutionId::sol2d_1, SolutionId::sol2d_2, SolutionId::sol2d_3,
    SolutionId::sol2d_4, SolutionId::sol3d_1, SolutionId::sol3d_2,
    SolutionId::sol3d_3};

constexpr std::array<std::string_view, 7> kNames = {
    "sol2d_1", "sol2d_2", "sol2d_3", "sol2d_4", "sol3d_1", "sol3d_2", "sol3d_3"};

Shape disc(double x, double y, double r) { return Shape::ball({x, y, 0.0}, r); }

}  // namespace

linalg::DenseMatrix anisotropic_k() { return {{kK11, kK12}, {kK12, kK22}}; }

ExactSolution ExactSolution::get(SolutionId id) { return ExactSolution(id); }

ExactSolution ExactSolution::get(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return ExactSolution(kAllSolutions[i]);
  }
  throw ConfigError("unknown solution '" + std::string(name) + "'");
}

std::span<const SolutionId> ExactSolution::all() { return kAllSolutions; }

std::string_view ExactSolution::name() const noexcept {
  return kNames[static_cast<std::size_t>(id_)];
}

int ExactSolution::dim() const noexcept {
  return static_cast<int>(id_) <= static_cast<int>(SolutionId::sol2d_4) ? 2 : 3;
}

bool ExactSolution::harmonic() const noexcept {
  return id_ != SolutionId::sol2d_1 && id_ != SolutionId::sol3d_3;
}

double ExactSolution::value(const Point& p) const noexcept {
  double const x = p[0];
  double const y = p[1];
  double const z = p[2];
  switch (id_) {
    case SolutionId::sol2d_1:
    case SolutionId::sol3d_3:
      return 0.75 * (1.0 - x * x) + 0.25 * y * y * y;
    case SolutionId::sol2d_2:
      return -x * x * x / 3.0 - x * x * y + x * y * y + y * y * y / 3.0;
    case SolutionId::sol2d_3:
      return x * x - y * y;
    case SolutionId::sol2d_4:
      return kA4 * x * x * x - x * x * y + x * y * y - kB4 * y * y * y;
    case SolutionId::sol3d_1:
      return x * y + y * y - z * z;
    case SolutionId::sol3d_2:
      return 1.0 / std::sqrt(x * x + y * y + z * z);
  }
  return 0.0;
}

Point ExactSolution::gradient(const Point& p) const noexcept {
  double const x = p[0];
  double const y = p[1];
  double const z = p[2];
  switch (id_) {
    case SolutionId::sol2d_1:
    case SolutionId::sol3d_3:
      return {-1.5 * x, 0.75 * y * y, 0.0};
    case SolutionId::sol2d_2:
      return {-x * x - 2.0 * x * y + y * y, -x * x + 2.0 * x * y + y * y, 0.0};
    case SolutionId::sol2d_3:
      return {2.0 * x, -2.0 * y, 0.0};
    case SolutionId::sol2d_4:
      return {3.0 * kA4 * x * x - 2.0 * x * y + y * y,
              -x * x + 2.0 * x * y - 3.0 * kB4 * y * y, 0.0};
    case SolutionId::sol3d_1:
      return {y, x + 2.0 * y, -2.0 * z};
    case SolutionId::sol3d_2: {
      double const r2 = x * x + y * y + z * z;
      double const r3 = r2 * std::sqrt(r2);
      return {-x / r3, -y / r3, -z / r3};
    }
  }
  return {0, 0, 0};
}

std::size_t ExampleConfig::m0() const noexcept {
  std::size_t m = 0;
  for (auto const& c : gamma0) m += c.count;
  return m;
}

std::size_t ExampleConfig::m1() const noexcept {
  std::size_t m = 0;
  for (auto const& c : gamma1) m += c.count;
  return m;
}

Domain ExampleConfig::domain() const { return Domain(dim, outer, holes, parts); }

std::vector<std::string> example_ids() {
  return {"ex5_1", "ex5_2", "ex5_3", "ex5_4", "ex5_5", "ex5_6", "ex5_7"};
}

ExampleConfig example(std::string_view id) {
  using P = Part;
  ExampleConfig c;
  c.id = std::string(id);
  if (id == "ex5_1") {
    c.outer = Shape::box(1.0);
    c.holes = {disc(0.5, 0.0, 0.2)};
    c.parts = {P::gamma0, P::gamma1};
    c.gamma0 = {{0, 400}};
    c.gamma1 = {{1, 50}};
    c.gamma_d = Shape::box(0.95);
    c.m_d = 40;
    c.n_paper = 1'000'000;
    c.n_desk = 100'000;
    c.eps = 1e-7;
  } else if (id == "ex5_2" || id == "ex5_3") {
    c.outer = disc(0.0, 0.0, 1.0);
    c.holes = {disc(0.0, 0.0, id == "ex5_2" ? 0.5 : 0.2)};
    c.parts = {P::gamma0, P::gamma1};
    c.gamma0 = {{0, 500}};
    c.gamma1 = {{1, 100}};
    c.gamma_d = disc(0.0, 0.0, 0.95);
    c.m_d = 100;
    c.n_paper = 1'000'000;
    c.n_desk = 100'000;
  } else if (id == "ex5_4") {
    c.outer = disc(0.0, 0.0, 1.0);
    c.parts = {P::gamma0};
    c.gamma0 = {{0, 500}};
    for (int l = 1; l <= 5; ++l) {
      double const theta = 2.0 * (l - 1) * std::numbers::pi / 5.0;
      c.holes.push_back(disc(0.5 * std::cos(theta), 0.5 * std::sin(theta), 0.2));
      c.parts.push_back(P::gamma1);
      c.gamma1.push_back({static_cast<std::size_t>(l), 100});
    }
    c.gamma_d = disc(0.0, 0.0, 0.95);
    c.m_d = 100;
    c.n_paper = 1'000'000;
    c.n_desk = 100'000;
  } else if (id == "ex5_5") {
    c.outer = Shape::box(1.0);
    c.holes = {disc(0.5, 0.0, 0.2)};
    c.parts = {P::gamma1, P::gamma1};
    c.gamma1 = {{0, 400}, {1, 50}};
    c.gamma_d = disc(-0.5, 0.5, 0.3);
    c.m_d = 40;
    c.n_paper = 1'000'000;
    c.n_desk = 100'000;
  } else if (id == "ex5_6" || id == "ex5_7") {
    c.dim = 3;
    c.outer = Shape::ball({0, 0, 0}, 1.0);
    c.holes = {Shape::ball({id == "ex5_6" ? 0.0 : 0.3, 0.0, 0.0}, 0.5)};
    c.parts = {P::gamma0, P::gamma1};
    c.gamma0 = {{0, 1000}};
    c.gamma1 = {{1, 100}};
    c.gamma_d = Shape::ball({0, 0, 0}, 0.95);
    c.m_d = 100;
    c.n_paper = 100'000;
    c.n_desk = 10'000;
  } else {
    throw ConfigError("unknown example '" + std::string(id) + "'");
  }
  return c;
}

ExampleSetup build_setup(const ExampleConfig& cfg) {
  ExampleSetup s{cfg.domain(), {}, {}, {}};
  for (auto const& c : cfg.gamma1) {
    s.x1.append(boundary_points(s.domain, c.component, c.count));
  }
  for (auto const& c : cfg.gamma0) {
    s.x0.append(boundary_points(s.domain, c.component, c.count));
  }
  s.xd = shape_points(cfg.gamma_d, cfg.dim, cfg.m_d);
  return s;
}

MeasurementSet synthesize_measurements(const ExampleSetup& setup,
                                       const ExactSolution& sol,
                                       const ConductivityTensor& k) {
  if (sol.dim() != setup.domain.dim()) {
    throw ConfigError("solution " + std::string(sol.name()) +
                      " does not match the domain dimension");
  }
  ConductivityTensor const want =
      sol.anisotropic() ? ConductivityTensor::make(anisotropic_k())
                        : ConductivityTensor::identity(sol.dim());
  if (k.dim() != want.dim() || (k.k() - want.k()).max_abs() > 1e-12) {
    throw ConfigError("solution " + std::string(sol.name()) +
                      " requires a different conductivity tensor");
  }
  MeasurementSet m;
  m.interior_points = setup.xd.points;
  for (auto const& p : m.interior_points) m.interior_values.push_back(sol.value(p));
  m.nu = MeasurementSet::uniform_nu(m.interior_points.size());
  m.boundary_points = setup.x0.points;
  for (auto const& p : m.boundary_points) m.boundary_values.push_back(sol.value(p));
  return m;
}

std::vector<double> boundary_truth(const ExampleSetup& setup,
                                   const ExactSolution& sol) {
  std::vector<double> t;
  t.reserve(setup.x1.size());
  for (auto const& p : setup.x1.points) t.push_back(sol.value(p));
  return t;
}

ReconstructionError reconstruction_error(std::span<const double> truth,
                                         std::span<const double> solution,
                                         std::span<const double> sigma) {
  if (truth.size() != solution.size() || truth.size() != sigma.size()) {
    throw InvalidInput("reconstruction_error: length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  ReconstructionError e;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    double const d = solution[k] - truth[k];
    num += sigma[k] * d * d;
    den += sigma[k] * truth[k] * truth[k];
    e.linf = std::max(e.linf, std::abs(d));
  }
  e.absolute = !(den > 0.0);
  e.l2 = e.absolute ? std::sqrt(num) : std::sqrt(num / den);
  return e;
}

std::vector<ReconstructionError> reconstruction_error(
    std::span<const double> truth, const TsvdFamily& family,
    std::span<const double> sigma) {
  std::vector<ReconstructionError> out;
  for (std::size_t n = 0; n < family.r_values.size(); ++n) {
    out.push_back(reconstruction_error(truth, family.solutions.row(n), sigma));
  }
  return out;
}

double poisson_kernel_oracle(const Point& x, const Point& y, int dim) {
  double const area = dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  double const r = norm(x, dim);
  if (!(r < 1.0)) throw InvalidInput("Poisson kernel pole must lie inside the ball");
  double const d = distance(x, y, dim);
  return (1.0 - r * r) / (area * std::pow(d, dim));
}

double annulus_hit_oracle(double r0, double r1, double rho) {
  if (!(0.0 < r1 && r1 < r0) || rho < r1 || rho > r0) {
    throw InvalidInput("annulus_hit_oracle: need 0 < r1 <= rho <= r0");
  }
  return std::log(r0 / rho) / std::log(r0 / r1);
}

}  // namespace mcrem::bench
