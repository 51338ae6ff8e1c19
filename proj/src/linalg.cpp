#include "mcrem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mcrem/error.hpp"

namespace mcrem::linalg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;

void require_finite(const DenseMatrix& a, const char* who) {
  if (!a.all_finite()) {
    throw InvalidInput(std::string(who) + ": matrix has non-finite entries");
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Orthonormalizes the columns of q in place with modified Gram-Schmidt.
// Columns flagged in `derived` are kept (after projection); the rest are
// replaced by unit vectors orthogonal to every previous column.
void orthonormalize_columns(DenseMatrix& q, const std::vector<bool>& derived) {
  std::size_t const n = q.rows();
  std::size_t const k = q.cols();
  std::size_t next_axis = 0;
  std::vector<double> v(n);

  auto project_out = [&](std::size_t upto) {
    for (std::size_t j = 0; j < upto; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += q(i, j) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * q(i, j);
    }
  };
  auto norm = [&] { return std::sqrt(dot(v, v)); };

  for (std::size_t col = 0; col < k; ++col) {
    double len = 0.0;
    if (derived[col]) {
      for (std::size_t i = 0; i < n; ++i) v[i] = q(i, col);
      double const before = norm();
      project_out(col);
      project_out(col);
      len = norm();
      if (!(len > 1e-8 * before)) len = 0.0;
    }
    while (len == 0.0) {
      if (next_axis >= n) {
        throw Error("orthonormal completion ran out of basis vectors");
      }
      std::fill(v.begin(), v.end(), 0.0);
      v[next_axis++] = 1.0;
      project_out(col);
      project_out(col);
      len = norm();
      if (len < 1e-6) len = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) q(i, col) = v[i] / len;
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  entries_.reserve(rows_ * cols_);
  for (auto const& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ragged matrix initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

double DenseMatrix::frobenius_norm() const {
  return std::sqrt(dot(entries_, entries_));
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, std::abs(x));
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double x) { return std::isfinite(x); });
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix product shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double const aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("matrix difference shape mismatch");
  }
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InvalidInput("matrix-vector shape mismatch");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

std::vector<double> transpose_times(const DenseMatrix& a,
                                    std::span<const double> x) {
  if (a.rows() != x.size()) throw InvalidInput("matrix-vector shape mismatch");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ai[j] * x[i];
  }
  return y;
}

DenseMatrix scale_rows_cols(const DenseMatrix& a, std::span<const double> left,
                            std::span<const double> right) {
  if (left.size() != a.rows() || right.size() != a.cols()) {
    throw InvalidInput("scaling vector shape mismatch");
  }
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      c(i, j) = left[i] * a(i, j) * right[j];
    }
  }
  return c;
}

SymEig sym_eig(const DenseMatrix& input) {
  if (!input.square()) throw InvalidInput("sym_eig: matrix is not square");
  require_finite(input, "sym_eig");
  std::size_t const n = input.rows();
  double const scale = input.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale) {
        throw InvalidInput("sym_eig: matrix is not symmetric");
      }
    }
  }

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      double const s = 0.5 * (input(i, j) + input(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }
  }
  DenseMatrix v = DenseMatrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double const apq = a(p, q);
        double const app = a(p, p);
        double const aqq = a(q, q);
        if (std::abs(apq) <= kEps * std::sqrt(std::abs(app * aqq)) ||
            std::abs(apq) < std::numeric_limits<double>::min()) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        double const theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = std::copysign(1.0, theta) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        double const c = 1.0 / std::sqrt(t * t + 1.0);
        double const s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double const g = a(k, p);
          double const h = a(k, q);
          a(k, p) = c * g - s * h;
          a(k, q) = s * g + c * h;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double const g = a(p, k);
          double const h = a(q, k);
          a(p, k) = c * g - s * h;
          a(q, k) = s * g + c * h;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double const g = v(k, p);
          double const h = v(k, q);
          v(k, p) = c * g - s * h;
          v(k, q) = s * g + c * h;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });

  SymEig result;
  result.values.resize(n);
  result.vectors = DenseMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    result.values[c] = a(order[c], order[c]);
    for (std::size_t k = 0; k < n; ++k) result.vectors(k, c) = v(k, order[c]);
  }
  return result;
}

std::size_t numerical_rank(std::span<const double> sigma, std::size_t rows,
                           std::size_t cols) {
  if (sigma.empty() || !(sigma[0] > 0.0)) return 0;
  double const tol =
      static_cast<double>(std::max(rows, cols)) * kEps * sigma[0];
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > tol; }));
}

Svd svd(const DenseMatrix& b) {
  require_finite(b, "svd");
  std::size_t const n = b.rows();
  std::size_t const m = b.cols();
  bool const wide = n <= m;
  // One-sided Jacobi on the k columns of a = (wide ? B^T : B): rotate column
  // pairs until mutually orthogonal, accumulating the rotations in w.
  DenseMatrix a = wide ? b.transposed() : b;
  std::size_t const len = a.rows();
  std::size_t const k = a.cols();
  DenseMatrix w = DenseMatrix::identity(k);
  double const tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          double const x = a(i, p), y = a(i, q);
          alpha += x * x;
          beta += y * y;
          gamma += x * y;
        }
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        double const zeta = (beta - alpha) / (2.0 * gamma);
        double const t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        double const c = 1.0 / std::sqrt(1.0 + t * t);
        double const sn = c * t;
        auto rotate = [&](DenseMatrix& mat, std::size_t rows) {
          for (std::size_t i = 0; i < rows; ++i) {
            double const x = mat(i, p), y = mat(i, q);
            mat(i, p) = c * x - sn * y;
            mat(i, q) = sn * x + c * y;
          }
        };
        rotate(a, len);
        rotate(w, k);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(k);
  for (std::size_t j = 0; j < k; ++j) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) s2 += a(i, j) * a(i, j);
    norms[j] = std::sqrt(s2);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Svd out;
  out.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.sigma[i] = norms[order[i]];
  std::size_t const rank = numerical_rank(out.sigma, n, m);

  DenseMatrix near(k, k);  // accumulated rotations, small side
  DenseMatrix far(len, k);
  std::vector<bool> derived(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t const j = order[i];
    for (std::size_t r = 0; r < k; ++r) near(r, i) = w(r, j);
    if (i < rank) {
      for (std::size_t r = 0; r < len; ++r) far(r, i) = a(r, j) / out.sigma[i];
      derived[i] = true;
    }
  }
  orthonormalize_columns(far, derived);

  if (wide) {
    out.u = std::move(near);
    out.v = std::move(far);
  } else {
    out.u = std::move(far);
    out.v = std::move(near);
  }
  return out;
}

TruncatedPseudoInverse::TruncatedPseudoInverse(DenseMatrix u,
                                               std::vector<double> inv_sigma,
                                               DenseMatrix v, bool gap_warning)
    : u_(std::move(u)),
      inv_sigma_(std::move(inv_sigma)),
      v_(std::move(v)),
      gap_warning_(gap_warning) {}

std::vector<double> TruncatedPseudoInverse::apply(
    std::span<const double> q) const {
  std::vector<double> c = transpose_times(u_, q);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= inv_sigma_[i];
  return v_ * std::span<const double>(c);
}

DenseMatrix TruncatedPseudoInverse::matrix() const {
  DenseMatrix p(v_.rows(), u_.rows());
  for (std::size_t i = 0; i < v_.rows(); ++i) {
    for (std::size_t j = 0; j < u_.rows(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < inv_sigma_.size(); ++l) {
        s += v_(i, l) * inv_sigma_[l] * u_(j, l);
      }
      p(i, j) = s;
    }
  }
  return p;
}

TruncatedPseudoInverse tsvd_pinv(const Svd& f, std::size_t rows,
                                 std::size_t cols, std::size_t r) {
  if (r == 0) throw InvalidInput("tsvd_pinv: truncation level must be >= 1");
  std::size_t const rank = numerical_rank(f.sigma, rows, cols);
  if (r > rank) {
    throw RankError("tsvd_pinv: truncation level " + std::to_string(r) +
                        " exceeds numerical rank " + std::to_string(rank),
                    rank);
  }
  bool gap_warning = false;
  if (r < f.sigma.size()) {
    gap_warning = f.sigma[r - 1] - f.sigma[r] <= 1e-10 * f.sigma[0];
  }
  DenseMatrix u(f.u.rows(), r);
  DenseMatrix v(f.v.rows(), r);
  std::vector<double> inv(r);
  for (std::size_t l = 0; l < r; ++l) {
    inv[l] = 1.0 / f.sigma[l];
    for (std::size_t i = 0; i < u.rows(); ++i) u(i, l) = f.u(i, l);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, l) = f.v(i, l);
  }
  return {std::move(u), std::move(inv), std::move(v), gap_warning};
}

TruncatedPseudoInverse tsvd_pinv(const DenseMatrix& b, std::size_t r) {
  return tsvd_pinv(svd(b), b.rows(), b.cols(), r);
}

DenseMatrix sym_sqrt(const DenseMatrix& k) {
  SymEig e = sym_eig(k);
  std::size_t const n = k.rows();
  if (n == 0) return {};
  double const lmax = e.values.front();
  double const lmin = e.values.back();
  if (lmin < -1e-10 * std::max(1.0, lmax)) {
    throw NotPsdError("sym_sqrt: negative eigenvalue " + std::to_string(lmin));
  }
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        acc += e.vectors(i, l) * std::sqrt(std::max(e.values[l], 0.0)) *
               e.vectors(j, l);
      }
      s(i, j) = acc;
      s(j, i) = acc;
    }
  }
  return s;
}

}  // namespace mcrem::linalg
