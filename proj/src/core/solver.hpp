#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/banded.hpp"
#include "core/grid.hpp"
#include "core/model.hpp"
#include "core/steklov.hpp"

namespace radbif {

struct NewtonConfig {
  double tol_residual = 1e-10;  // max-norm of the residual
  int max_iter = 50;
  double min_damping = 1.0 / (1 << 20);
};

/// Right-hand side of the flux rows: u_c'(R) = law(c, u_other(R)).
struct BoundaryLaw {
  std::function<double(Component, double)> value;
  std::function<double(Component, double)> derivative;
};

/// law(c, s) = lambda f_c(s)
BoundaryLaw model_law(const NonlinearityModel& model, double lambda);
/// law(1, s) = b2 s^p2, law(2, s) = b1 s^p1 (odd extension for s < 0).
BoundaryLaw limit_law(const NonlinearityModel& model);

/// Unknowns are interleaved: index 2j holds u1(r_j), 2j+1 holds u2(r_j).
std::vector<double> pack(const SystemState& state);
SystemState unpack(std::span<const double> packed);

/// Discrete system in interleaved order. Interior rows carry the radial
/// operator multiplied by h^2; flux rows are u_c'(R) - law(c, u_other(R)).
std::vector<double> residual(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& state);
std::vector<double> residual(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                             const SystemState& state);

/// Analytic Jacobian of `residual` (lower bandwidth 4, upper 2).
BandMatrix jacobian(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& state);
BandMatrix jacobian(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                    const SystemState& state);

/// d residual / d lambda.
std::vector<double> lambda_derivative(const RadialGrid& grid, const NonlinearityModel& model,
                                      const SystemState& state);

double max_abs(std::span<const double> v);

enum class StateClass { Positive, Trivial, NonPositive };

/// Pair norms at or below this are indistinguishable from zero at the
/// default residual tolerance.
inline constexpr double kTrivialNorm = 1e-9;
/// Positive iff every node exceeds this fraction of the pair norm.
inline constexpr double kPositivityFraction = 1e-12;

StateClass classify(const SystemState& state);
const char* to_string(StateClass c) noexcept;

struct NewtonReport {
  SystemState state;
  int iterations = 0;
  double residual_norm = 0.0;
  double final_damping = 1.0;
  std::vector<double> residual_history;  // entry k: before iteration k+1
  std::vector<double> step_history;
  StateClass classification = StateClass::Trivial;
};

/// Damped Newton at fixed law. NonConvergence error (message carries the
/// residual history) when max_iter is exhausted.
NewtonReport newton_solve(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& init,
                          const NewtonConfig& cfg = {});
/// Domain error for lambda < 0.
NewtonReport newton_solve(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                          const SystemState& init, const NewtonConfig& cfg = {});

/// Nontrivial positive solution of the pure-power problem starting from
/// `init`. CollapsedToZero error when Newton lands on the trivial state.
NewtonReport solve_limit_problem(const RadialGrid& grid, const NonlinearityModel& model,
                                 const SystemState& init, const NewtonConfig& cfg = {});

/// Tries init = c (phi1, phi1) for c in `amplitudes` and returns the first
/// nontrivial positive solution.
NewtonReport solve_limit_problem_sweep(const RadialGrid& grid, const NonlinearityModel& model,
                                       const SteklovPair& steklov, const NewtonConfig& cfg = {},
                                       std::span<const double> amplitudes = {});

/// Solution of -Δv + v = 0 with v_c'(R) = flux_c: the discrete
/// Neumann-to-Dirichlet solution operator.
SystemState linear_bvp_solve(const FluxOperator& op, double flux1, double flux2);
SystemState linear_bvp_solve(const RadialGrid& grid, double flux1, double flux2);

}  // namespace radbif
