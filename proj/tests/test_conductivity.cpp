#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mcrem/bench_catalog.hpp"
#include "mcrem/conductivity.hpp"
#include "mcrem/error.hpp"

using mcrem::ConductivityTensor;
using mcrem::linalg::DenseMatrix;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).max_abs(); }

// div(K grad u) by central second differences with step h.
double fd_operator(const mcrem::bench::ExactSolution& sol, const DenseMatrix& k,
                   const mcrem::Point& x, double h) {
  int const d = sol.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      auto shifted = [&](double si, double sj) {
        mcrem::Point p = x;
        p[i] += si;
        p[j] += sj;
        return sol.value(p);
      };
      double const dij = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) /
                         (4.0 * h * h);
      acc += k(i, j) * dij;
    }
  }
  return acc;
}

}  // namespace

TEST(Conductivity, Identity) {
  auto const t = ConductivityTensor::make(DenseMatrix::identity(2));
  EXPECT_TRUE(t.is_identity());
  EXPECT_EQ(t.k(), DenseMatrix::identity(2));
  EXPECT_EQ(t.k_sqrt(), DenseMatrix::identity(2));
  EXPECT_EQ(t.lambda_max_original(), 1.0);
}

TEST(Conductivity, DiagonalNormalizes) {
  auto const t = ConductivityTensor::make(DenseMatrix{{4, 0}, {0, 1}});
  EXPECT_FALSE(t.is_identity());
  EXPECT_NEAR(t.k()(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(t.k()(1, 1), 0.25, 1e-15);
  EXPECT_NEAR(t.k_sqrt()(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(t.k_sqrt()(1, 1), 0.5, 1e-14);
  EXPECT_NEAR(t.lambda_max_original(), 4.0, 1e-14);
  EXPECT_LE(max_abs_diff(t.raw(), DenseMatrix{{4, 0}, {0, 1}}), 1e-14);
}

TEST(Conductivity, AnisotropicFactor) {
  DenseMatrix const raw = mcrem::bench::anisotropic_k();
  auto const t = ConductivityTensor::make(raw);
  // lambda_max of [[1, 0.3], [0.3, 0.4]] = 0.7 + sqrt(0.09 + 0.09).
  double const lmax = 0.7 + std::sqrt(0.18);
  EXPECT_NEAR(t.lambda_max_original(), lmax, 1e-14);
  EXPECT_NEAR(mcrem::linalg::sym_eig(t.k()).values.front(), 1.0, 1e-12);
  EXPECT_LE(max_abs_diff(t.k_sqrt() * t.k_sqrt(), t.k()), 1e-10);
}

TEST(Conductivity, ThreeDimensional) {
  DenseMatrix const raw{{2, 0.5, 0}, {0.5, 1, 0.2}, {0, 0.2, 0.5}};
  auto const t = ConductivityTensor::make(raw);
  EXPECT_EQ(t.dim(), 3);
  EXPECT_LE(max_abs_diff(t.k_sqrt() * t.k_sqrt(), t.k()), 1e-10);
}

TEST(Conductivity, RejectsNonElliptic) {
  try {
    ConductivityTensor::make(DenseMatrix{{1, 2}, {2, 1}});
    FAIL() << "expected EllipticityError";
  } catch (const mcrem::EllipticityError& e) {
    EXPECT_NEAR(e.eigenvalue(), -1.0, 1e-12);
  }
  EXPECT_THROW(ConductivityTensor::make(DenseMatrix{{1, 0}, {0, 0}}), mcrem::EllipticityError);
  EXPECT_THROW(ConductivityTensor::make(DenseMatrix(4, 4)), mcrem::InvalidInput);
}

TEST(Conductivity, AnisotropicSolutionIsHarmonicUnderScaling) {
  auto const sol = mcrem::bench::ExactSolution::get("sol2d_4");
  DenseMatrix const raw = mcrem::bench::anisotropic_k();
  auto const t = ConductivityTensor::make(raw);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int s = 0; s < 100; ++s) {
    mcrem::Point const x{u(gen), u(gen), 0};
    EXPECT_LE(std::abs(fd_operator(sol, raw, x, 1e-3)), 1e-8);
    EXPECT_LE(std::abs(fd_operator(sol, t.k(), x, 1e-3)), 1e-8);
  }
}

TEST(Conductivity, StepStaysInsideInscribedBall) {
  auto const t = ConductivityTensor::make(mcrem::bench::anisotropic_k());
  auto const t3 = ConductivityTensor::make(DenseMatrix{{2, 0.5, 0}, {0.5, 1, 0.2}, {0, 0.2, 0.5}});
  std::mt19937_64 gen(8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> rho(0.0, 2.0);
  for (int s = 0; s < 100000; ++s) {
    auto const& k = s % 2 == 0 ? t : t3;
    int const d = k.dim();
    mcrem::Point v{g(gen), g(gen), d == 3 ? g(gen) : 0.0};
    double const n = mcrem::norm(v, d);
    double const r = rho(gen);
    for (int i = 0; i < d; ++i) v[i] *= r / n;
    ASSERT_LE(mcrem::norm(k.apply_sqrt(v), d), r * (1.0 + 1e-15));
  }
}
