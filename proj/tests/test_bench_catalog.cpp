#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcrem/bench_catalog.hpp"
#include "mcrem/error.hpp"

using namespace mcrem;
using namespace mcrem::bench;

namespace {

double laplacian_k(const ExactSolution& s, const Point& x, const linalg::DenseMatrix& k,
                   double h) {
  int const d = s.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) {
        Point p = x, m = x;
        p[i] += h;
        m[i] -= h;
        acc += k(i, i) * (s.value(p) - 2.0 * s.value(x) + s.value(m)) / (h * h);
        continue;
      }
      Point pp = x, pm = x, mp = x, mm = x;
      pp[i] += h;
      pp[j] += h;
      pm[i] += h;
      pm[j] -= h;
      mp[i] -= h;
      mp[j] += h;
      mm[i] -= h;
      mm[j] -= h;
      double const dij = (s.value(pp) - s.value(pm) - s.value(mp) + s.value(mm)) / (4 * h * h);
      acc += k(i, j) * dij;
    }
  }
  return acc;
}

std::vector<Point> interior_samples(const Domain& dom, int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    Point p{u(gen), u(gen), dom.dim() == 3 ? u(gen) : 0.0};
    if (dom.dist_to_boundary(p) > 1e-2) pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST(ExactSolution, DirectEvaluations) {
  auto const s1 = ExactSolution::get("sol2d_1");
  EXPECT_DOUBLE_EQ(s1.value({1, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(s1.value({0, 1, 0}), 1.0);
  auto const s32 = ExactSolution::get("sol3d_2");
  for (Point p : {Point{0.95, 0, 0}, Point{0, -0.95, 0}, Point{0.95 / std::sqrt(3.0),
                                                              0.95 / std::sqrt(3.0),
                                                              0.95 / std::sqrt(3.0)}}) {
    EXPECT_NEAR(s32.value(p), 1.0 / 0.95, 1e-14);
  }
  EXPECT_THROW(ExactSolution::get("sol9"), ConfigError);
}

TEST(ExactSolution, GradientsMatchFiniteDifferences) {
  for (auto id : ExactSolution::all()) {
    auto const s = ExactSolution::get(id);
    Point const x{0.31, -0.47, s.dim() == 3 ? 0.22 : 0.0};
    auto const g = s.gradient(x);
    for (int i = 0; i < s.dim(); ++i) {
      Point a = x, b = x;
      a[i] += 1e-6;
      b[i] -= 1e-6;
      EXPECT_NEAR(g[i], (s.value(a) - s.value(b)) / 2e-6, 1e-8) << s.name();
    }
  }
}

TEST(ExactSolution, HarmonicUnderRequiredTensor) {
  for (auto id : ExactSolution::all()) {
    auto const s = ExactSolution::get(id);
    auto const k = s.anisotropic() ? anisotropic_k() : linalg::DenseMatrix::identity(s.dim());
    auto const dom = example(s.dim() == 2 ? "ex5_2" : "ex5_6").domain();
    for (auto const& x : interior_samples(dom, 200, 17)) {
      double const lap = laplacian_k(s, x, k, 1e-4);
      if (s.harmonic()) {
        ASSERT_LE(std::abs(lap), 1e-6) << s.name();
      } else {
        // The quadratic-cubic pair has Laplacian 1.5 (x2 - 1).
        ASSERT_NEAR(lap, 1.5 * (x[1] - 1.0), 1e-6) << s.name();
      }
    }
  }
}

TEST(Examples, ParametersVerbatim) {
  struct Row {
    const char* id;
    std::size_t m0, m1, md;
    std::uint64_t n;
    double eps;
  };
  Row const rows[] = {{"ex5_1", 400, 50, 40, 1'000'000, 1e-7},
                      {"ex5_2", 500, 100, 100, 1'000'000, 1e-10},
                      {"ex5_3", 500, 100, 100, 1'000'000, 1e-10},
                      {"ex5_4", 500, 500, 100, 1'000'000, 1e-10},
                      {"ex5_5", 0, 450, 40, 1'000'000, 1e-10},
                      {"ex5_6", 1000, 100, 100, 100'000, 1e-10},
                      {"ex5_7", 1000, 100, 100, 100'000, 1e-10}};
  EXPECT_EQ(example_ids().size(), 7u);
  for (auto const& r : rows) {
    auto const c = example(r.id);
    EXPECT_EQ(c.m0(), r.m0) << r.id;
    EXPECT_EQ(c.m1(), r.m1) << r.id;
    EXPECT_EQ(c.m_d, r.md) << r.id;
    EXPECT_EQ(c.n_paper, r.n) << r.id;
    EXPECT_EQ(c.eps, r.eps) << r.id;
    EXPECT_EQ(c.n_desk * 10, c.n_paper) << r.id;
  }
  auto const e4 = example("ex5_4");
  ASSERT_EQ(e4.gamma1.size(), 5u);
  for (std::size_t l = 0; l < 5; ++l) {
    EXPECT_EQ(e4.gamma1[l].count, 100u);
    double const th = 2.0 * static_cast<double>(l) * std::numbers::pi / 5.0;
    EXPECT_NEAR(e4.holes[l].center[0], 0.5 * std::cos(th), 1e-15);
    EXPECT_NEAR(e4.holes[l].center[1], 0.5 * std::sin(th), 1e-15);
  }
  EXPECT_EQ(example("ex5_7").holes[0].center[0], 0.3);
  EXPECT_THROW(example("ex5_8"), ConfigError);
}

TEST(Examples, MeasurementLociAtStatedOffsets) {
  for (auto const& id : example_ids()) {
    auto const c = example(id);
    auto const s = build_setup(c);
    ASSERT_EQ(s.xd.size(), c.m_d);
    ASSERT_EQ(s.x1.size(), c.m1());
    ASSERT_EQ(s.x0.size(), c.m0());
    for (auto const& p : s.xd.points) {
      if (id == "ex5_5") {
        EXPECT_NEAR(distance(p, {-0.5, 0.5, 0}, 2), 0.3, 1e-12);
      } else {
        // dist(x, Gamma0) = 0.05 with Gamma0 the outer boundary.
        double const outer = c.outer.kind == Shape::Kind::box
                                 ? 1.0 - std::max(std::abs(p[0]), std::abs(p[1]))
                                 : 1.0 - norm(p, c.dim);
        EXPECT_NEAR(outer, 0.05, 1e-12) << id;
      }
    }
  }
}

TEST(Synthesis, TracesAndWeights) {
  auto const setup = build_setup(example("ex5_1"));
  auto const sol = ExactSolution::get("sol2d_1");
  auto const m = synthesize_measurements(setup, sol, ConductivityTensor::identity(2));
  ASSERT_EQ(m.interior_values.size(), 40u);
  ASSERT_EQ(m.boundary_values.size(), 400u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(m.interior_values[i], sol.value(m.interior_points[i]));
    EXPECT_DOUBLE_EQ(m.nu[i], 1.0 / std::sqrt(40.0));
  }
  for (std::size_t i = 0; i < 400; ++i) {
    EXPECT_EQ(m.boundary_values[i], sol.value(m.boundary_points[i]));
  }
  EXPECT_NO_THROW(m.validate(setup.domain, 1e-7));
}

TEST(Synthesis, TensorMismatchIsConfigError) {
  auto const setup = build_setup(example("ex5_2"));
  auto const aniso = ConductivityTensor::make(anisotropic_k());
  EXPECT_THROW(synthesize_measurements(setup, ExactSolution::get("sol2d_2"), aniso),
               ConfigError);
  EXPECT_THROW(synthesize_measurements(setup, ExactSolution::get("sol2d_4"),
                                       ConductivityTensor::identity(2)),
               ConfigError);
  EXPECT_NO_THROW(synthesize_measurements(setup, ExactSolution::get("sol2d_4"), aniso));
  EXPECT_THROW(synthesize_measurements(setup, ExactSolution::get("sol3d_1"),
                                       ConductivityTensor::identity(3)),
               ConfigError);
}

TEST(BoundaryTruth, Evaluations) {
  auto const s1 = build_setup(example("ex5_1"));
  auto const t = boundary_truth(s1, ExactSolution::get("sol2d_3"));
  // First anchor of the hole sits at angle 0: (0.7, 0).
  EXPECT_NEAR(s1.x1.points[0][0], 0.7, 1e-15);
  EXPECT_NEAR(t[0], 0.49, 1e-14);
  auto const s6 = build_setup(example("ex5_6"));
  for (double v : boundary_truth(s6, ExactSolution::get("sol3d_2"))) EXPECT_NEAR(v, 2.0, 1e-13);
  auto const s2 = build_setup(example("ex5_2"));
  auto const t4 = boundary_truth(s2, ExactSolution::get("sol2d_4"));
  // Second implementation of the anisotropic cubic with K11 = 1, K12 = 0.3, K22 = 0.4.
  for (std::size_t k = 0; k < t4.size(); ++k) {
    double const x = s2.x1.points[k][0], y = s2.x1.points[k][1];
    double const a = (0.6 - 0.4) / 3.0, b = (0.6 - 1.0) / 1.2;
    double const expect = a * std::pow(x, 3) - std::pow(x, 2) * y + x * std::pow(y, 2) -
                          b * std::pow(y, 3);
    EXPECT_NEAR(t4[k], expect, 1e-14);
  }
}

TEST(ReconstructionError, ClosedForms) {
  std::vector<double> const t{1.0, 2.0, -1.0}, sigma{0.5, 0.25, 0.25};
  auto e = reconstruction_error(t, t, sigma);
  EXPECT_EQ(e.l2, 0.0);
  EXPECT_EQ(e.linf, 0.0);
  EXPECT_FALSE(e.absolute);
  std::vector<double> const z(3, 0.0);
  e = reconstruction_error(z, z, sigma);
  EXPECT_TRUE(e.absolute);
  EXPECT_EQ(e.l2, 0.0);
  // Constant offset c on Gamma1 of measure |Gamma1| = 1.
  double const c = 0.3;
  std::vector<double> const u{c, c, c};
  e = reconstruction_error(z, u, sigma);
  EXPECT_TRUE(e.absolute);
  EXPECT_NEAR(e.l2, c * std::sqrt(1.0), 1e-15);
  EXPECT_NEAR(e.linf, c, 1e-15);
  std::vector<double> const off{t[0] + c, t[1] + c, t[2] + c};
  e = reconstruction_error(t, off, sigma);
  EXPECT_NEAR(e.l2, c / std::sqrt(0.5 + 1.0 + 0.25), 1e-15);
  EXPECT_THROW(reconstruction_error(t, z, std::vector<double>{1.0}), InvalidInput);
}

TEST(PoissonKernel, Examples) {
  EXPECT_NEAR(poisson_kernel_oracle({0, 0, 0}, {0, 1, 0}, 2), 1.0 / (2 * std::numbers::pi),
              1e-15);
  EXPECT_NEAR(poisson_kernel_oracle({0, 0, 0}, {0, 0, 1}, 3), 1.0 / (4 * std::numbers::pi),
              1e-15);
  EXPECT_NEAR(poisson_kernel_oracle({0.5, 0, 0}, {1, 0, 0}, 2), 3.0 / (2 * std::numbers::pi),
              1e-14);
  EXPECT_THROW(poisson_kernel_oracle({1.0, 0, 0}, {1, 0, 0}, 2), InvalidInput);
}

TEST(PoissonKernel, IntegratesToOne) {
  int const n = 10000;
  double s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    double const a = 2.0 * std::numbers::pi * (k + 0.5) / n;
    s2 += poisson_kernel_oracle({0.5, 0.2, 0}, {std::cos(a), std::sin(a), 0}, 2) *
          (2.0 * std::numbers::pi / n);
  }
  EXPECT_NEAR(s2, 1.0, 1e-10);
  // 3D: midpoint rule in (cos theta, phi), 100 x 100 nodes.
  double s3 = 0.0;
  int const m = 100;
  for (int i = 0; i < m; ++i) {
    double const ct = -1.0 + 2.0 * (i + 0.5) / m, st = std::sqrt(1.0 - ct * ct);
    for (int j = 0; j < m; ++j) {
      double const ph = 2.0 * std::numbers::pi * (j + 0.5) / m;
      s3 += poisson_kernel_oracle({0.0, 0.0, 0.3}, {st * std::cos(ph), st * std::sin(ph), ct},
                                 3) *
            (2.0 / m) * (2.0 * std::numbers::pi / m);
    }
  }
  EXPECT_NEAR(s3, 1.0, 1e-3);
}

TEST(AnnulusOracle, LimitsAndValue) {
  EXPECT_DOUBLE_EQ(annulus_hit_oracle(1.0, 0.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(annulus_hit_oracle(1.0, 0.5, 1.0), 0.0);
  EXPECT_NEAR(annulus_hit_oracle(1.0, 0.5, 0.95), 0.074000, 1e-6);
  EXPECT_DOUBLE_EQ(annulus_hit_oracle(1.0, 0.5, 0.95), std::log(1.0 / 0.95) / std::log(2.0));
  EXPECT_THROW(annulus_hit_oracle(1.0, 0.5, 0.4), InvalidInput);
}

TEST(AnnulusOracle, AgreesWithRadialFiniteDifference) {
  // (r p')' = 0 on [0.5, 1], p(0.5) = 1, p(1) = 0; Thomas algorithm on 1e4 nodes.
  int const n = 10000;
  double const r1 = 0.5, r0 = 1.0, h = (r0 - r1) / (n - 1);
  std::vector<double> a(n), b(n), c(n), d(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    double const r = r1 + i * h;
    a[i] = r - h / 2;
    c[i] = r + h / 2;
    b[i] = -(a[i] + c[i]);
  }
  b[0] = 1.0;
  d[0] = 1.0;
  b[n - 1] = 1.0;
  for (int i = 1; i < n; ++i) {
    double const w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> p(n);
  p[n - 1] = d[n - 1] / b[n - 1];
  for (int i = n - 2; i >= 0; --i) p[i] = (d[i] - c[i] * p[i + 1]) / b[i];
  int const i95 = static_cast<int>(std::lround((0.95 - r1) / h));
  EXPECT_NEAR(p[i95], annulus_hit_oracle(r0, r1, r1 + i95 * h), 1e-7);
  EXPECT_NEAR(p[i95], 0.074000, 1e-4);
}

TEST(RoundTrip, ZeroSolutionGivesZeroReconstruction) {
  auto const cfg = example("ex5_1");
  auto const setup = build_setup(cfg);
  auto m = synthesize_measurements(setup, ExactSolution::get("sol2d_3"),
                                   ConductivityTensor::identity(2));
  std::fill(m.interior_values.begin(), m.interior_values.end(), 0.0);
  std::fill(m.boundary_values.begin(), m.boundary_values.end(), 0.0);
  auto const fam1 = WeightFamily::voronoi(setup.x1, 2);
  auto const fam0 = WeightFamily::voronoi(setup.x0, 2);
  auto const sigma = cell_measures(fam1, setup.domain);
  WalkConfig wc;
  wc.eps = cfg.eps;
  auto const b = mc_rem(setup.domain, ConductivityTensor::identity(2), m, fam1, &fam0, sigma,
                        wc, 500);
  std::vector<std::size_t> rs{1, 5, 10, 15};
  auto const fam = tsvd_family(b, m, rs);
  for (double v : fam.solutions.data()) EXPECT_EQ(v, 0.0);
}
