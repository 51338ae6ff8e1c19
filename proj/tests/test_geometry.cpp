#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcrem/bench_catalog.hpp"
#include "mcrem/error.hpp"
#include "mcrem/geometry.hpp"

using mcrem::Domain;
using mcrem::Part;
using mcrem::Point;
using mcrem::Shape;

namespace {

constexpr double kPi = std::numbers::pi;

Domain annulus() {
  return Domain(2, Shape::ball({0, 0, 0}, 1.0), {Shape::ball({0, 0, 0}, 0.5)},
                {Part::gamma0, Part::gamma1});
}

Point random_inside(const Domain& dom, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Point p{u(gen), u(gen), dom.dim() == 3 ? u(gen) : 0.0};
    if (dom.dist_to_boundary(p) > 0.0) return p;
  }
}

}  // namespace

TEST(DistToBoundary, Examples) {
  Domain const square(2, Shape::box(1.0), {}, {Part::gamma0});
  EXPECT_DOUBLE_EQ(square.dist_to_boundary({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(annulus().dist_to_boundary({0.75, 0, 0}), 0.25);
  Domain const ex51 = mcrem::bench::example("ex5_1").domain();
  EXPECT_NEAR(ex51.dist_to_boundary({0.5, 0.5, 0}), 0.3, 1e-15);
}

TEST(DistToBoundary, SignedOutside) {
  EXPECT_LT(annulus().dist_to_boundary({1.2, 0, 0}), 0.0);
  EXPECT_LT(annulus().dist_to_boundary({0.1, 0, 0}), 0.0);
}

TEST(DistToBoundary, LowerBoundsEveryBoundarySample) {
  for (auto const& id : {"ex5_1", "ex5_4", "ex5_7"}) {
    auto const cfg = mcrem::bench::example(id);
    Domain const dom = cfg.domain();
    std::vector<mcrem::BoundaryPointSet> samples;
    for (std::size_t c = 0; c < dom.num_components(); ++c) {
      if (dom.dim() == 3 && c == 0 && dom.outer().kind == Shape::Kind::box) continue;
      samples.push_back(mcrem::boundary_points(dom, c, 64));
    }
    std::mt19937_64 gen(5);
    for (int t = 0; t < 10000; ++t) {
      Point const x = random_inside(dom, gen);
      double const d = dom.dist_to_boundary(x);
      for (auto const& set : samples) {
        for (auto const& p : set.points) {
          ASSERT_LE(d, mcrem::distance(x, p, dom.dim()) + 1e-15);
        }
      }
      double best = 1e300;
      for (std::size_t c = 0; c < dom.num_components(); ++c) {
        best = std::min(best, mcrem::distance(x, dom.project(c, x), dom.dim()));
      }
      ASSERT_NEAR(best, d, 1e-12);
    }
  }
}

TEST(ClassifyShell, AnnulusExamples) {
  Domain const dom = annulus();
  auto const inner = dom.classify_shell({0.501, 0, 0}, 1e-2);
  EXPECT_TRUE(inner.on_shell);
  EXPECT_EQ(inner.part, Part::gamma1);
  EXPECT_NEAR(inner.projected[0], 0.5, 1e-15);
  EXPECT_NEAR(inner.projected[1], 0.0, 1e-15);
  auto const outer = dom.classify_shell({0.999, 0, 0}, 1e-2);
  EXPECT_EQ(outer.part, Part::gamma0);
  EXPECT_EQ(outer.component, 0u);
  EXPECT_NEAR(outer.projected[0], 1.0, 1e-15);
  EXPECT_FALSE(dom.classify_shell({0.75, 0, 0}, 1e-2).on_shell);
}

TEST(ClassifyShell, FiveDiscMatchesExhaustiveScan) {
  Domain const dom = mcrem::bench::example("ex5_4").domain();
  Shape const& hole3 = dom.component_shape(3);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), off(0.0, 1e-3);
  for (int t = 0; t < 1000; ++t) {
    double const a = ang(gen);
    double const r = hole3.size + off(gen);
    Point const x{hole3.center[0] + r * std::cos(a), hole3.center[1] + r * std::sin(a), 0};
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t c = 0; c < 6; ++c) {
      Shape const& s = dom.component_shape(c);
      double const dc = c == 0 ? s.size - mcrem::norm(x, 2)
                               : mcrem::distance(x, s.center, 2) - s.size;
      if (dc < bd) {
        bd = dc;
        best = c;
      }
    }
    auto const cls = dom.classify_shell(x, 1e-2);
    ASSERT_EQ(cls.component, best);
    ASSERT_EQ(best, 3u);
    ASSERT_NEAR(mcrem::distance(x, cls.projected, 2), dom.dist_to_boundary(x), 1e-12);
  }
}

TEST(ClassifyShell, TieBreaksToLowestIndex) {
  Domain const dom(2, Shape::ball({0, 0, 0}, 1.0),
                   {Shape::ball({-0.5, 0, 0}, 0.2), Shape::ball({0.5, 0, 0}, 0.2)},
                   {Part::gamma0, Part::gamma1, Part::gamma1});
  auto const cls = dom.classify_shell({0.0, 0.0, 0}, 0.5);
  EXPECT_TRUE(cls.tie);
  EXPECT_EQ(cls.component, 1u);
}

TEST(BoundaryPoints, CircleQuarterTurns) {
  auto const set = mcrem::shape_points(Shape::ball({0, 0, 0}, 1.0), 2, 4);
  double const expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(set.points[k][0], expected[k][0], 1e-15);
    EXPECT_NEAR(set.points[k][1], expected[k][1], 1e-15);
    EXPECT_DOUBLE_EQ(set.params[k], k * kPi / 2.0);
  }
}

TEST(BoundaryPoints, BauerSpiral) {
  Point const p = mcrem::bauer_point(1, 1);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  double const phi = std::acos(0.75);
  double const theta = std::sqrt(4.0 * kPi) * phi;
  Point const q = mcrem::bauer_point(1, 4);
  EXPECT_DOUBLE_EQ(q[0], std::sin(phi) * std::cos(theta));
  EXPECT_DOUBLE_EQ(q[1], std::sin(phi) * std::sin(theta));
  EXPECT_DOUBLE_EQ(q[2], std::cos(phi));
}

TEST(BoundaryPoints, SquareStartsAtBottomRight) {
  auto const set = mcrem::shape_points(Shape::box(1.0), 2, 8);
  // M = 8 puts two points per side: the corner and the side midpoint.
  double const mid[8][2] = {{1, -1}, {1, 0}, {1, 1}, {0, 1},
                            {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(set.points[k][0], mid[k][0], 1e-15);
    EXPECT_NEAR(set.points[k][1], mid[k][1], 1e-15);
  }
}

TEST(BoundaryPoints, RejectsEmpty) {
  EXPECT_THROW(mcrem::shape_points(Shape::ball({0, 0, 0}, 1.0), 2, 0), mcrem::InvalidInput);
}

TEST(BoundaryPoints, LieOnShapesAndClassifyBack) {
  for (auto const& id : mcrem::bench::example_ids()) {
    auto const cfg = mcrem::bench::example(id);
    Domain const dom = cfg.domain();
    for (std::size_t c = 0; c < dom.num_components(); ++c) {
      auto const set = mcrem::boundary_points(dom, c, 97);
      for (std::size_t k = 0; k < set.size(); ++k) {
        ASSERT_LE(std::abs(dom.component_distance(c, set.points[k])), 1e-12) << id;
        auto const cls = dom.classify_shell(set.points[k], 1e-10);
        ASSERT_TRUE(cls.on_shell);
        ASSERT_EQ(cls.component, c) << id;
        ASSERT_EQ(set.component_ids[k], c);
      }
    }
  }
}

TEST(SurfaceMeasure, Examples) {
  EXPECT_DOUBLE_EQ(mcrem::shape_measure(Shape::ball({0, 0, 0}, 0.5), 2), kPi);
  EXPECT_DOUBLE_EQ(mcrem::shape_measure(Shape::box(1.0), 2), 8.0);
  EXPECT_DOUBLE_EQ(mcrem::shape_measure(Shape::ball({0, 0, 0}, 1.0), 3), 4.0 * kPi);
  Domain const five = mcrem::bench::example("ex5_4").domain();
  EXPECT_NEAR(five.surface_measure(Part::gamma1), 2.0 * kPi, 1e-14);
}

TEST(SurfaceQuadrature, WeightsSumToMeasure) {
  for (auto const& [s, dim] : {std::pair{Shape::box(1.0), 2},
                               std::pair{Shape::ball({0.5, 0, 0}, 0.2), 2},
                               std::pair{Shape::ball({0, 0, 0}, 0.5), 3}}) {
    auto const q = mcrem::shape_quadrature(s, dim, 1000);
    double total = 0.0;
    for (double w : q.weights) total += w;
    EXPECT_NEAR(total, mcrem::shape_measure(s, dim), 1e-12);
  }
}

TEST(DomainValidation, RejectsBadHoles) {
  EXPECT_THROW(Domain(2, Shape::ball({0, 0, 0}, 1.0), {Shape::ball({0.9, 0, 0}, 0.2)},
                      {Part::gamma0, Part::gamma1}),
               mcrem::GeometryError);
  EXPECT_THROW(Domain(2, Shape::ball({0, 0, 0}, 1.0),
                      {Shape::ball({0.1, 0, 0}, 0.2), Shape::ball({-0.1, 0, 0}, 0.2)},
                      {Part::gamma0, Part::gamma1, Part::gamma1}),
               mcrem::GeometryError);
  EXPECT_THROW(Domain(2, Shape::ball({0, 0, 0}, 1.0), {}, {}), mcrem::GeometryError);
  EXPECT_THROW(Domain(4, Shape::ball({0, 0, 0}, 1.0), {}, {Part::gamma0}),
               mcrem::GeometryError);
}

TEST(DomainValidation, MinimalGap) {
  Domain const dom = mcrem::bench::example("ex5_2").domain();
  EXPECT_DOUBLE_EQ(dom.min_component_gap(), 0.5);
}
