#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "core/errors.hpp"

namespace radbif {

RadialGrid::RadialGrid(int n_dim, double radius, int intervals)
    : n_dim_(n_dim), radius_(radius), intervals_(intervals), h_(radius / intervals) {
  require(n_dim >= 3, ErrorCode::Config, "grid: dimension N must be at least 3");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::Config, "grid: radius must be positive");
  require(intervals >= kMinIntervals, ErrorCode::Config, "grid: need at least 16 intervals");
}

std::vector<double> RadialGrid::node_values() const {
  std::vector<double> r(nodes());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = node(j);
  r.back() = radius_;
  return r;
}

RadialGrid build_grid(int n_dim, double radius, int intervals) { return {n_dim, radius, intervals}; }

SystemState SystemState::zeros(const RadialGrid& grid) {
  return {std::vector<double>(grid.nodes(), 0.0), std::vector<double>(grid.nodes(), 0.0)};
}

std::vector<double> apply_operator(const RadialGrid& grid, std::span<const double> u) {
  require(u.size() == grid.nodes(), ErrorCode::Domain, "apply_operator: length mismatch");
  const std::size_t m = grid.nodes() - 1;
  const double h = grid.spacing(), h2 = h * h;
  const double n = grid.dimension();
  std::vector<double> out(m);
  out[0] = -2.0 * n * (u[1] - u[0]) / h2 + u[0];
  for (std::size_t j = 1; j < m; ++j) {
    const double r = grid.node(j);
    const double second = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / h2;
    const double first = (u[j + 1] - u[j - 1]) / (2.0 * h);
    out[j] = -second - (n - 1.0) / r * first + u[j];
  }
  return out;
}

double boundary_flux(const RadialGrid& grid, std::span<const double> u) {
  require(u.size() == grid.nodes(), ErrorCode::Domain, "boundary_flux: length mismatch");
  const std::size_t m = u.size() - 1;
  return (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * grid.spacing());
}

double sup_norm(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

double pair_norm(const SystemState& state) { return sup_norm(state.u1) + sup_norm(state.u2); }

double min_node(const SystemState& state) {
  return std::min(*std::min_element(state.u1.begin(), state.u1.end()),
                  *std::min_element(state.u2.begin(), state.u2.end()));
}

void write_state_csv(std::ostream& os, const RadialGrid& grid, const SystemState& state) {
  const auto old = os.precision(17);
  os << "r,u1,u2\n";
  const auto r = grid.node_values();
  for (std::size_t j = 0; j < r.size(); ++j) os << r[j] << ',' << state.u1[j] << ',' << state.u2[j] << '\n';
  os.precision(old);
}

}  // namespace radbif
