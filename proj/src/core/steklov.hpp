#pragma once

#include <vector>

#include "core/banded.hpp"
#include "core/grid.hpp"

namespace radbif {

/// Factored radial operator with the flux row u'(R) - shift * u(R).
///
/// solve(q) returns the grid function with zero interior residual and
/// boundary row equal to q, i.e. the discrete solution of
/// -Δv + v = 0, v'(R) - shift v(R) = q.
class FluxOperator {
 public:
  explicit FluxOperator(const RadialGrid& grid, double shift = 0.0);

  [[nodiscard]] std::vector<double> solve(double boundary_value) const;
  [[nodiscard]] const RadialGrid& grid() const noexcept { return grid_; }

 private:
  RadialGrid grid_;
  BandLU lu_;
};

struct SteklovPair {
  double mu1 = 0.0;
  std::vector<double> phi1;  // positive, increasing, phi1(R) = 1
  int iterations = 0;
};

struct SteklovOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double shift = 0.0;
};

/// First eigenpair of the discrete radial Steklov problem by shifted
/// inverse iteration. NonConvergence error if the eigenvalue estimate has
/// not settled within max_iter.
SteklovPair steklov_eigenpair(const RadialGrid& grid, const SteklovOptions& opts = {});

/// g'(R)/g(R) for the regular solution of g'' + ((N-1)/r) g' - g = 0,
/// integrated with adaptive RK4 (step doubling) from a series start.
double steklov_shooting_oracle(int n_dim, double radius, double tol = 1e-10);

/// Closed form of the first eigenvalue for N = 3: coth(R) - 1/R.
double steklov_mu1_exact_3d(double radius);

}  // namespace radbif
