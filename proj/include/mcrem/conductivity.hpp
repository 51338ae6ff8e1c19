#pragma once

#include <array>

#include "mcrem/geometry.hpp"
#include "mcrem/linalg.hpp"

namespace mcrem {

/// Constant SPD conductivity, normalized so its largest eigenvalue is 1.
class ConductivityTensor {
 public:
  /// Throws EllipticityError (with the offending eigenvalue) unless raw is
  /// symmetric positive definite.
  static ConductivityTensor make(const linalg::DenseMatrix& raw);
  static ConductivityTensor identity(int dim);

  int dim() const noexcept { return dim_; }
  const linalg::DenseMatrix& k() const noexcept { return k_; }
  const linalg::DenseMatrix& k_sqrt() const noexcept { return k_sqrt_; }
  double lambda_max_original() const noexcept { return lambda_max_; }
  /// The unnormalized tensor, lambda_max_original * k().
  linalg::DenseMatrix raw() const;
  bool is_identity() const noexcept { return identity_; }

  /// K^{1/2} u for a d-vector (third component ignored in 2D).
  Point apply_sqrt(const Point& u) const noexcept {
    if (identity_) return u;
    Point out{0, 0, 0};
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) out[i] += s_[i][j] * u[j];
    }
    return out;
  }

 private:
  ConductivityTensor() = default;

  int dim_ = 0;
  linalg::DenseMatrix k_;
  linalg::DenseMatrix k_sqrt_;
  double lambda_max_ = 1.0;
  bool identity_ = false;
  std::array<std::array<double, 3>, 3> s_{};
};

}  // namespace mcrem
