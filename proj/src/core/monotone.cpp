#include "core/monotone.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/solver.hpp"

namespace radbif {

namespace {

bool is_monotone(const NonlinearityModel& model) {
  for (double s : hypothesis_sample_grid()) {
    if (model.f(Component::First).derivative(s) < 0.0 || model.f(Component::Second).derivative(s) < 0.0)
      return false;
  }
  return true;
}

SystemState nodewise_min(const SystemState& a, const SystemState& b) {
  SystemState out = a;
  for (std::size_t j = 0; j < a.u1.size(); ++j) {
    out.u1[j] = std::min(a.u1[j], b.u1[j]);
    out.u2[j] = std::min(a.u2[j], b.u2[j]);
  }
  return out;
}

const SystemState& largest(const std::vector<SystemState>& states) {
  return *std::max_element(states.begin(), states.end(),
                           [](const auto& x, const auto& y) { return pair_norm(x) < pair_norm(y); });
}

}  // namespace

double default_subsolution_eps(const NonlinearityModel& model) {
  const double a = std::sqrt(model.slope_at_zero(Component::First));
  const double b = std::sqrt(model.slope_at_zero(Component::Second));
  return 1e-2 / std::max(a, b);
}

Subsolution build_subsolution(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                              double lambda, double eps) {
  require(eps > 0.0, ErrorCode::Domain, "subsolution: eps must be positive");
  const double a = std::sqrt(model.slope_at_zero(Component::First));
  const double b = std::sqrt(model.slope_at_zero(Component::Second));
  const double flux_phi = boundary_flux(grid, steklov.phi1);
  const double phi_r = steklov.phi1.back();
  for (int halvings = 0; halvings <= 40; ++halvings, eps *= 0.5) {
    // phi1 has zero interior residual, so only the flux rows can fail.
    const bool first = eps * a * flux_phi <= lambda * model.f(Component::First).value(eps * b * phi_r);
    const bool second = eps * b * flux_phi <= lambda * model.f(Component::Second).value(eps * a * phi_r);
    if (first && second) {
      Subsolution s{{steklov.phi1, steklov.phi1}, eps, halvings};
      for (double& v : s.state.u1) v *= eps * a;
      for (double& v : s.state.u2) v *= eps * b;
      return s;
    }
  }
  throw Error(ErrorCode::Subsolution,
              "subsolution: boundary inequalities fail for every eps tried (is lambda <= mu0?)");
}

MonotoneResult monotone_iterate(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                                const SystemState& sub, const std::optional<SystemState>& ceiling,
                                const MonotoneOptions& opts) {
  require(is_monotone(model), ErrorCode::Domain, "monotone iteration needs nondecreasing f1, f2");
  require(sub.u1.size() == grid.nodes() && sub.u2.size() == grid.nodes(), ErrorCode::Domain,
          "monotone iteration: state does not match the grid");
  const FluxOperator op(grid);
  const auto& f1 = model.f(Component::First);
  const auto& f2 = model.f(Component::Second);

  MonotoneResult out;
  SystemState u = sub;
  for (int k = 1; k <= opts.max_iter; ++k) {
    SystemState next = linear_bvp_solve(op, lambda * f1.value(u.u2.back()), lambda * f2.value(u.u1.back()));
    const double scale = pair_norm(u);
    double change = 0.0, worst = 0.0;
    for (std::size_t j = 0; j < u.u1.size(); ++j) {
      const double d1 = next.u1[j] - u.u1[j], d2 = next.u2[j] - u.u2[j];
      change = std::max({change, std::abs(d1), std::abs(d2)});
      worst = std::min({worst, d1, d2});
    }
    if (scale > 0.0) out.min_increment = std::min(out.min_increment, worst / scale);
    if (worst < -1e-12 * scale) {
      throw Error(ErrorCode::Monotonicity, "monotone iteration: iterate " + std::to_string(k) +
                                               " decreased at some node");
    }
    if (ceiling) {
      const double tol = 1e-12 * std::max(1.0, pair_norm(*ceiling));
      for (std::size_t j = 0; j < u.u1.size(); ++j) {
        if (next.u1[j] > ceiling->u1[j] + tol || next.u2[j] > ceiling->u2[j] + tol) {
          throw Error(ErrorCode::Monotonicity, "monotone iteration: iterate " + std::to_string(k) +
                                                   " exceeded the supersolution");
        }
      }
    }
    u = std::move(next);
    if (change <= opts.tol) {
      out.state = std::move(u);
      out.iterations = k;
      out.residual_norm = max_abs(residual(grid, model, lambda, out.state));
      return out;
    }
  }
  throw Error(ErrorCode::NonConvergence,
              "monotone iteration: no convergence in " + std::to_string(opts.max_iter) + " iterations");
}

SecondSolution second_solution(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                               double lambda, const Branch& branch, const NewtonConfig& cfg,
                               const MonotoneOptions& opts) {
  require(lambda > branch.mu0, ErrorCode::Domain, "second_solution: lambda must exceed mu0");
  const auto fold = detect_fold(branch);
  require(fold.has_value(), ErrorCode::Domain, "second_solution: branch has no fold");
  require(lambda <= fold->lambda, ErrorCode::Domain, "second_solution: lambda lies beyond the fold");

  const auto states = solutions_at(branch, lambda, grid, model, cfg);

  // Ceiling: nodewise min of the upper solutions at lambda and at a larger lambda0 < fold.
  std::optional<SystemState> ceiling;
  if (!states.empty()) {
    ceiling = largest(states);
    const auto above = solutions_at(branch, 0.5 * (lambda + fold->lambda), grid, model, cfg);
    if (!above.empty()) ceiling = nodewise_min(*ceiling, largest(above));
  }

  const auto sub = build_subsolution(grid, model, steklov, lambda, default_subsolution_eps(model));
  auto minimal = monotone_iterate(grid, model, lambda, sub.state, ceiling, opts);

  const double n_min = pair_norm(minimal.state);
  const SystemState* other = nullptr;
  for (const auto& s : states) {
    const double n = pair_norm(s);
    if (std::abs(n - n_min) > kDistinctGap * std::max(n, n_min) && (!other || n > pair_norm(*other))) other = &s;
  }
  if (other == nullptr) {
    throw Error(ErrorCode::Distinctness, "second_solution: only one positive solution found at lambda = " +
                                             std::to_string(lambda));
  }

  SecondSolution out;
  out.minimal = std::move(minimal.state);
  out.other = *other;
  out.minimal_residual = max_abs(residual(grid, model, lambda, out.minimal));
  out.other_residual = max_abs(residual(grid, model, lambda, out.other));
  const double n_other = pair_norm(out.other);
  out.norm_gap = std::abs(n_other - n_min) / std::max(n_other, n_min);
  out.monotone_iterations = minimal.iterations;
  return out;
}

}  // namespace radbif
