#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcrem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong shapes, non-finite entries, empty sets.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Truncation level exceeds the numerical rank of the operator.
class RankError : public Error {
 public:
  RankError(const std::string& what, std::size_t numerical_rank)
      : Error(what), numerical_rank_(numerical_rank) {}
  std::size_t numerical_rank() const noexcept { return numerical_rank_; }

 private:
  std::size_t numerical_rank_;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Conductivity tensor is not symmetric positive definite.
class EllipticityError : public Error {
 public:
  EllipticityError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent run configuration (unknown keys, mismatched tensor, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A walk did not reach the boundary shell within its step budget.
class WalkBudgetError : public Error {
 public:
  WalkBudgetError(const std::string& what, std::size_t pole,
                  std::uint64_t replicate)
      : Error(what), pole_(pole), replicate_(replicate) {}
  std::size_t pole() const noexcept { return pole_; }
  std::uint64_t replicate() const noexcept { return replicate_; }

 private:
  std::size_t pole_;
  std::uint64_t replicate_;
};

}  // namespace mcrem
