#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mcrem::linalg {

/// Dense row-major matrix of doubles, sized for problems up to ~1000x1000.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;

  std::span<double> data() noexcept { return entries_; }
  std::span<const double> data() const noexcept { return entries_; }

  DenseMatrix transposed() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);
std::vector<double> transpose_times(const DenseMatrix& a,
                                    std::span<const double> x);

/// Scales row i by left[i] and column j by right[j].
DenseMatrix scale_rows_cols(const DenseMatrix& a, std::span<const double> left,
                            std::span<const double> right);

/// Full symmetric eigendecomposition, eigenvalues sorted descending.
struct SymEig {
  std::vector<double> values;
  DenseMatrix vectors;  // column i pairs with values[i]
};

/// Cyclic Jacobi rotations. Throws InvalidInput for non-square, non-finite or
/// asymmetric (beyond 1e-12 relative) input.
SymEig sym_eig(const DenseMatrix& a);

/// Thin SVD: B = U diag(sigma) V^T with U rows x k, V cols x k,
/// k = min(rows, cols), sigma descending and nonnegative.
struct Svd {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

/// One-sided Jacobi; small singular values keep high relative accuracy.
Svd svd(const DenseMatrix& b);

/// sigma_i counts toward the rank iff sigma_i > max(rows, cols) * eps * sigma_1.
std::size_t numerical_rank(std::span<const double> sigma, std::size_t rows,
                           std::size_t cols);

/// B^+_r = V Sigma_r^{-1} U^T restricted to the r leading singular triplets.
class TruncatedPseudoInverse {
 public:
  TruncatedPseudoInverse(DenseMatrix u, std::vector<double> inv_sigma,
                         DenseMatrix v, bool gap_warning);

  std::size_t rank_used() const noexcept { return inv_sigma_.size(); }
  const DenseMatrix& u() const noexcept { return u_; }
  const DenseMatrix& v() const noexcept { return v_; }
  std::span<const double> inv_sigma() const noexcept { return inv_sigma_; }
  /// sigma_r and sigma_{r+1} coincide, so the truncation splits a cluster.
  bool gap_warning() const noexcept { return gap_warning_; }

  std::vector<double> apply(std::span<const double> q) const;
  DenseMatrix matrix() const;

 private:
  DenseMatrix u_;  // rows x r
  std::vector<double> inv_sigma_;
  DenseMatrix v_;  // cols x r
  bool gap_warning_;
};

TruncatedPseudoInverse tsvd_pinv(const DenseMatrix& b, std::size_t r);
TruncatedPseudoInverse tsvd_pinv(const Svd& factors, std::size_t rows,
                                 std::size_t cols, std::size_t r);

/// Symmetric square root of a symmetric positive semidefinite matrix.
/// Throws NotPsdError if an eigenvalue lies below -1e-10.
DenseMatrix sym_sqrt(const DenseMatrix& k);

}  // namespace mcrem::linalg
