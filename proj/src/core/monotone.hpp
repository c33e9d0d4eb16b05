#pragma once

#include <optional>

#include "core/continuation.hpp"
#include "core/grid.hpp"
#include "core/model.hpp"
#include "core/steklov.hpp"

namespace radbif {

struct Subsolution {
  SystemState state;  // (eps a phi1, eps b phi1)
  double eps = 0.0;
  int halvings = 0;
};

/// eps0 = 1e-2 / max(a, b) with a = sqrt(f1'(0)), b = sqrt(f2'(0)).
double default_subsolution_eps(const NonlinearityModel& model);

/// Halves eps (at most 40 times) until the discrete boundary inequalities
/// u_c'(R) <= lambda f_c(u_other(R)) hold. Subsolution error otherwise.
Subsolution build_subsolution(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                              double lambda, double eps);

struct MonotoneOptions {
  double tol = 1e-12;   // max nodal change between iterates
  int max_iter = 1'000'000;
};

struct MonotoneResult {
  SystemState state;
  int iterations = 0;
  double residual_norm = 0.0;
  double min_increment = 0.0;  // most negative nodal change seen, relative to pair_norm
};

/// u^{k+1} = T(lambda f(u^k)) with T the discrete Neumann-to-Dirichlet map.
/// Monotonicity error if an iterate decreases at some node or rises above
/// `ceiling`; NonConvergence error when max_iter runs out.
MonotoneResult monotone_iterate(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                                const SystemState& sub, const std::optional<SystemState>& ceiling,
                                const MonotoneOptions& opts = {});

struct SecondSolution {
  SystemState minimal;   // limit of the monotone iteration
  SystemState other;     // distinct branch solution at the same lambda
  double minimal_residual = 0.0;
  double other_residual = 0.0;
  double norm_gap = 0.0;  // relative pair_norm difference
  int monotone_iterations = 0;
};

/// Two positive solutions at lambda in (mu0, fold]. Domain error outside
/// that interval; Distinctness error when only one solution is found.
SecondSolution second_solution(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                               double lambda, const Branch& branch, const NewtonConfig& cfg = {},
                               const MonotoneOptions& opts = {});

}  // namespace radbif
