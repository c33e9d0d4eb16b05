#include "core/banded.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace radbif {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), width_(2 * lower + upper + 1), data_(n * width_, 0.0) {}

bool BandMatrix::in_band(std::size_t i, std::size_t j) const noexcept {
  return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
}

double& BandMatrix::operator()(std::size_t i, std::size_t j) {
  require(in_band(i, j), ErrorCode::Domain, "band matrix entry outside band");
  return data_[index(i, j)];
}

double BandMatrix::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[index(i, j)];
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::Domain, "band multiply: size mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += data_[index(i, j)] * x[j];
    y[i] = acc;
  }
  return y;
}

BandLU::BandLU(BandMatrix a) : lu_(std::move(a)), pivot_(lu_.n_) {
  const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
  auto at = [this](std::size_t i, std::size_t j) -> double& { return lu_.data_[lu_.index(i, j)]; };

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + kl);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        p = i;
      }
    }
    require(best > 0.0, ErrorCode::Domain, "band LU: singular matrix");
    pivot_[k] = p;
    const std::size_t last_col = std::min(n - 1, k + kl + ku);
    if (p != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
    }
    const double inv = 1.0 / at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double l = at(i, k) * inv;
      at(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
    }
  }
}

void BandLU::solve_in_place(std::span<double> b) const {
  const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
  require(b.size() == n, ErrorCode::Domain, "band solve: size mismatch");
  auto at = [this](std::size_t i, std::size_t j) { return lu_.data_[lu_.index(i, j)]; };

  for (std::size_t k = 0; k < n; ++k) {
    if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
    const std::size_t last_row = std::min(n - 1, k + kl);
    for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= at(i, k) * b[k];
  }
  for (std::size_t kk = n; kk-- > 0;) {
    const std::size_t last_col = std::min(n - 1, kk + kl + ku);
    double acc = b[kk];
    for (std::size_t j = kk + 1; j <= last_col; ++j) acc -= at(kk, j) * b[j];
    b[kk] = acc / at(kk, kk);
  }
}

std::vector<double> BandLU::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

}  // namespace radbif
