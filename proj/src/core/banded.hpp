#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace radbif {

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Storage reserves `lower` extra super-diagonals so that LU with row
/// pivoting can be done in place (same layout idea as LAPACK's gbtrf).
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t lower() const noexcept { return kl_; }
  [[nodiscard]] std::size_t upper() const noexcept { return ku_; }

  /// True if (i, j) lies inside the declared band.
  [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const noexcept;

  double& operator()(std::size_t i, std::size_t j);
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;

  /// y = A x
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

 private:
  friend class BandLU;
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return i * width_ + (j + kl_ - i);
  }

  std::size_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting restricted to the band.
class BandLU {
 public:
  /// Throws Error(Domain) on an exactly singular pivot.
  explicit BandLU(BandMatrix a);

  void solve_in_place(std::span<double> rhs) const;
  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

 private:
  BandMatrix lu_;
  std::vector<std::size_t> pivot_;
};

}  // namespace radbif
