#include "core/steklov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace radbif {

namespace {

BandMatrix flux_matrix(const RadialGrid& grid, double shift) {
  const std::size_t n = grid.nodes(), m = n - 1;
  const double h = grid.spacing();
  const double dim = grid.dimension();
  BandMatrix a(n, 2, 1);
  // Interior rows are scaled by h^2.
  a(0, 0) = 2.0 * dim + h * h;
  a(0, 1) = -2.0 * dim;
  for (std::size_t j = 1; j < m; ++j) {
    const double c = (dim - 1.0) * h / (2.0 * grid.node(j));
    a(j, j - 1) = -1.0 + c;
    a(j, j) = 2.0 + h * h;
    a(j, j + 1) = -1.0 - c;
  }
  a(m, m - 2) = 1.0 / (2.0 * h);
  a(m, m - 1) = -4.0 / (2.0 * h);
  a(m, m) = 3.0 / (2.0 * h) - shift;
  return a;
}

}  // namespace

FluxOperator::FluxOperator(const RadialGrid& grid, double shift)
    : grid_(grid), lu_(flux_matrix(grid, shift)) {}

std::vector<double> FluxOperator::solve(double boundary_value) const {
  std::vector<double> rhs(grid_.nodes(), 0.0);
  rhs.back() = boundary_value;
  lu_.solve_in_place(rhs);
  return rhs;
}

SteklovPair steklov_eigenpair(const RadialGrid& grid, const SteklovOptions& opts) {
  require(opts.tol > 0.0 && opts.tol <= 1e-4, ErrorCode::Domain, "steklov: tol must lie in (0, 1e-4]");
  const FluxOperator op(grid, opts.shift);

  std::vector<double> phi(grid.nodes(), 1.0);
  double mu = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= opts.max_iter; ++it) {
    // (A - shift B) phi_new = B phi: only the boundary node of B phi is nonzero.
    phi = op.solve(phi.back());
    const double scale = phi.back();
    require(scale != 0.0 && std::isfinite(scale), ErrorCode::NonConvergence,
            "steklov: inverse iteration produced a vanishing boundary value");
    for (double& v : phi) v /= scale;
    const double mu_new = boundary_flux(grid, phi);
    const double interior = sup_norm(apply_operator(grid, phi));
    const bool settled = std::isfinite(mu) && std::abs(mu_new - mu) <= opts.tol * std::abs(mu_new);
    mu = mu_new;
    if (settled && interior * grid.spacing() * grid.spacing() <= opts.tol) {
      SteklovPair pair{mu, std::move(phi), it};
      const auto top = std::max_element(pair.phi1.begin(), pair.phi1.end());
      require(*std::min_element(pair.phi1.begin(), pair.phi1.end()) > 0.0 &&
                  top == pair.phi1.end() - 1,
              ErrorCode::NonConvergence, "steklov: eigenfunction is not positive with its max on the boundary");
      return pair;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "steklov: inverse iteration did not converge in " << opts.max_iter
      << " iterations; last mu = " << mu << ", last phi(0) = " << phi.front();
  throw Error(ErrorCode::NonConvergence, msg.str());
}

double steklov_shooting_oracle(int n_dim, double radius, double tol) {
  require(n_dim >= 3, ErrorCode::Domain, "shooting oracle: N must be at least 3");
  require(radius > 0.0 && tol > 0.0, ErrorCode::Domain, "shooting oracle: radius and tol must be positive");
  const double dim = n_dim;
  using Vec = std::array<double, 2>;  // (g, g')

  // Series g = sum a_k r^{2k}, a_k = a_{k-1} / (2k (2k + N - 2)).
  const double r0 = std::min(0.05, radius / 4.0);
  Vec y{0.0, 0.0};
  double a = 1.0, pw = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      a /= 2.0 * k * (2.0 * k + dim - 2.0);
      y[1] += 2.0 * k * a * pw / r0;
    }
    y[0] += a * pw;
    pw *= r0 * r0;
    if (a * pw < 1e-20) break;
  }

  auto rhs = [dim](double r, const Vec& v) { return Vec{v[1], v[0] - (dim - 1.0) / r * v[1]}; };
  auto rk4 = [&rhs](double r, const Vec& v, double dr) {
    auto axpy = [](const Vec& p, double s, const Vec& q) { return Vec{p[0] + s * q[0], p[1] + s * q[1]}; };
    const Vec k1 = rhs(r, v);
    const Vec k2 = rhs(r + dr / 2, axpy(v, dr / 2, k1));
    const Vec k3 = rhs(r + dr / 2, axpy(v, dr / 2, k2));
    const Vec k4 = rhs(r + dr, axpy(v, dr, k3));
    return Vec{v[0] + dr / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
               v[1] + dr / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
  };

  const double local_tol = 1e-2 * tol;
  double r = r0, dr = (radius - r0) / 64.0;
  int steps = 0;
  while (r < radius) {
    require(++steps < 10'000'000, ErrorCode::NonConvergence, "shooting oracle: too many steps");
    dr = std::min(dr, radius - r);
    require(dr > 1e-14 * radius, ErrorCode::NonConvergence, "shooting oracle: step size underflow");
    const Vec full = rk4(r, y, dr);
    const Vec half = rk4(r + dr / 2, rk4(r, y, dr / 2), dr / 2);
    const double err = std::max(std::abs(half[0] - full[0]) / std::abs(half[0]),
                                std::abs(half[1] - full[1]) / std::max(std::abs(half[1]), 1e-300)) / 15.0;
    const double allowed = local_tol * dr / radius;
    if (err <= allowed) {
      r += dr;
      y = Vec{half[0] + (half[0] - full[0]) / 15.0, half[1] + (half[1] - full[1]) / 15.0};
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 4.0;
    dr *= std::clamp(factor, 0.2, 4.0);
  }
  return y[1] / y[0];
}

double steklov_mu1_exact_3d(double radius) { return 1.0 / std::tanh(radius) - 1.0 / radius; }

}  // namespace radbif
