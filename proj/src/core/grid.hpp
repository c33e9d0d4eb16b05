#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace radbif {

/// Uniform radial mesh r_j = j h, j = 0..M, on the ball of radius R in R^N.
class RadialGrid {
 public:
  /// Config error unless N >= 3, R > 0 and M >= 16.
  RadialGrid(int n_dim, double radius, int intervals);

  [[nodiscard]] int dimension() const noexcept { return n_dim_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] int intervals() const noexcept { return intervals_; }
  [[nodiscard]] std::size_t nodes() const noexcept { return static_cast<std::size_t>(intervals_) + 1; }
  [[nodiscard]] double spacing() const noexcept { return h_; }
  [[nodiscard]] double node(std::size_t j) const noexcept { return static_cast<double>(j) * h_; }
  [[nodiscard]] std::vector<double> node_values() const;

 private:
  int n_dim_;
  double radius_;
  int intervals_;
  double h_;
};

inline constexpr int kMinIntervals = 16;

RadialGrid build_grid(int n_dim, double radius, int intervals);

/// Nodal values of (u1, u2).
struct SystemState {
  std::vector<double> u1;
  std::vector<double> u2;

  static SystemState zeros(const RadialGrid& grid);
  [[nodiscard]] std::span<const double> component(int i) const { return i == 1 ? u1 : u2; }
};

/// -u'' - ((N-1)/r) u' + u at nodes j = 0..M-1 (size M). Row 0 uses the
/// symmetric limit -N u''(0) + u(0) with the ghost value u_{-1} = u_1.
std::vector<double> apply_operator(const RadialGrid& grid, std::span<const double> u);

/// One-sided second-order u'(R).
double boundary_flux(const RadialGrid& grid, std::span<const double> u);

double sup_norm(std::span<const double> u);

/// max|u1| + max|u2|
double pair_norm(const SystemState& state);

/// min over both components and all nodes.
double min_node(const SystemState& state);

/// Columns r,u1,u2 with 17 significant digits.
void write_state_csv(std::ostream& os, const RadialGrid& grid, const SystemState& state);

}  // namespace radbif
