#include "mcrem/conductivity.hpp"

#include <cmath>
#include <string>

#include "mcrem/error.hpp"

namespace mcrem {

ConductivityTensor ConductivityTensor::make(const linalg::DenseMatrix& raw) {
  if (!raw.square() || (raw.rows() != 2 && raw.rows() != 3)) {
    throw InvalidInput("conductivity must be a 2x2 or 3x3 matrix");
  }
  linalg::SymEig eig = linalg::sym_eig(raw);
  double const lmax = eig.values.front();
  double const lmin = eig.values.back();
  if (!(lmin > 0.0)) {
    throw EllipticityError(
        "conductivity is not positive definite; eigenvalue " +
            std::to_string(lmin),
        lmin);
  }

  ConductivityTensor t;
  t.dim_ = static_cast<int>(raw.rows());
  t.lambda_max_ = lmax;
  std::size_t const n = raw.rows();
  t.k_ = linalg::DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t.k_(i, j) = 0.5 * (raw(i, j) + raw(j, i)) / lmax;
    }
  }
  t.k_sqrt_ = linalg::sym_sqrt(t.k_);
  t.identity_ = t.k_ == linalg::DenseMatrix::identity(n);
  if (t.identity_) t.k_sqrt_ = linalg::DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.s_[i][j] = t.k_sqrt_(i, j);
  }
  return t;
}

ConductivityTensor ConductivityTensor::identity(int dim) {
  return make(linalg::DenseMatrix::identity(static_cast<std::size_t>(dim)));
}

linalg::DenseMatrix ConductivityTensor::raw() const {
  linalg::DenseMatrix r = k_;
  for (double& x : r.data()) x *= lambda_max_;
  return r;
}

}  // namespace mcrem
