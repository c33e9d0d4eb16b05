#include "core/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace radbif {

namespace {

double signed_power(double s, double p) { return std::copysign(std::pow(std::abs(s), p), s); }

void check_shape(const RadialGrid& grid, const SystemState& state) {
  require(state.u1.size() == grid.nodes() && state.u2.size() == grid.nodes(), ErrorCode::Domain,
          "state does not match the grid");
}

}  // namespace

BoundaryLaw model_law(const NonlinearityModel& model, double lambda) {
  return {[&model, lambda](Component c, double s) { return lambda * model.f(c).value(s); },
          [&model, lambda](Component c, double s) { return lambda * model.f(c).derivative(s); }};
}

BoundaryLaw limit_law(const NonlinearityModel& model) {
  const auto p = model.params();
  return {[p](Component c, double s) {
            return c == Component::First ? p.b2 * signed_power(s, p.p2) : p.b1 * signed_power(s, p.p1);
          },
          [p](Component c, double s) {
            return c == Component::First ? p.b2 * p.p2 * std::pow(std::abs(s), p.p2 - 1.0)
                                         : p.b1 * p.p1 * std::pow(std::abs(s), p.p1 - 1.0);
          }};
}

std::vector<double> pack(const SystemState& state) {
  std::vector<double> out(2 * state.u1.size());
  for (std::size_t j = 0; j < state.u1.size(); ++j) {
    out[2 * j] = state.u1[j];
    out[2 * j + 1] = state.u2[j];
  }
  return out;
}

SystemState unpack(std::span<const double> packed) {
  const std::size_t n = packed.size() / 2;
  SystemState s{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    s.u1[j] = packed[2 * j];
    s.u2[j] = packed[2 * j + 1];
  }
  return s;
}

double max_abs(std::span<const double> v) { return sup_norm(v); }

std::vector<double> residual(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& state) {
  check_shape(grid, state);
  const std::size_t m = grid.nodes() - 1;
  const double h2 = grid.spacing() * grid.spacing();
  std::vector<double> out(2 * grid.nodes());
  for (int c = 0; c < 2; ++c) {
    const auto& u = c == 0 ? state.u1 : state.u2;
    const auto interior = apply_operator(grid, u);
    for (std::size_t j = 0; j < m; ++j) out[2 * j + c] = h2 * interior[j];
    const Component comp = c == 0 ? Component::First : Component::Second;
    const double driver = c == 0 ? state.u2[m] : state.u1[m];
    out[2 * m + c] = boundary_flux(grid, u) - law.value(comp, driver);
  }
  return out;
}

std::vector<double> residual(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                             const SystemState& state) {
  return residual(grid, model_law(model, lambda), state);
}

BandMatrix jacobian(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& state) {
  check_shape(grid, state);
  const std::size_t m = grid.nodes() - 1;
  const double h = grid.spacing();
  const double dim = grid.dimension();
  BandMatrix jac(2 * grid.nodes(), 4, 2);
  for (std::size_t c = 0; c < 2; ++c) {
    auto at = [&jac, c](std::size_t row_node, std::size_t col_node) -> double& {
      return jac(2 * row_node + c, 2 * col_node + c);
    };
    at(0, 0) = 2.0 * dim + h * h;
    at(0, 1) = -2.0 * dim;
    for (std::size_t j = 1; j < m; ++j) {
      const double k = (dim - 1.0) * h / (2.0 * grid.node(j));
      at(j, j - 1) = -1.0 + k;
      at(j, j) = 2.0 + h * h;
      at(j, j + 1) = -1.0 - k;
    }
    at(m, m - 2) = 1.0 / (2.0 * h);
    at(m, m - 1) = -4.0 / (2.0 * h);
    at(m, m) = 3.0 / (2.0 * h);
    const Component comp = c == 0 ? Component::First : Component::Second;
    const double driver = c == 0 ? state.u2[m] : state.u1[m];
    jac(2 * m + c, 2 * m + (1 - c)) = -law.derivative(comp, driver);
  }
  return jac;
}

BandMatrix jacobian(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                    const SystemState& state) {
  return jacobian(grid, model_law(model, lambda), state);
}

std::vector<double> lambda_derivative(const RadialGrid& grid, const NonlinearityModel& model,
                                      const SystemState& state) {
  check_shape(grid, state);
  const std::size_t m = grid.nodes() - 1;
  std::vector<double> out(2 * grid.nodes(), 0.0);
  out[2 * m] = -model.f(Component::First).value(state.u2[m]);
  out[2 * m + 1] = -model.f(Component::Second).value(state.u1[m]);
  return out;
}

StateClass classify(const SystemState& state) {
  const double norm = pair_norm(state);
  if (!(norm > kTrivialNorm)) return StateClass::Trivial;
  return min_node(state) > kPositivityFraction * norm ? StateClass::Positive : StateClass::NonPositive;
}

const char* to_string(StateClass c) noexcept {
  switch (c) {
    case StateClass::Positive: return "positive";
    case StateClass::Trivial: return "trivial";
    case StateClass::NonPositive: return "non-positive";
  }
  return "unknown";
}

NewtonReport newton_solve(const RadialGrid& grid, const BoundaryLaw& law, const SystemState& init,
                          const NewtonConfig& cfg) {
  require(cfg.tol_residual > 0.0 && cfg.max_iter >= 1, ErrorCode::Config, "newton: invalid configuration");
  check_shape(grid, init);
  NewtonReport rep;
  std::vector<double> u = pack(init);
  auto eval = [&](std::span<const double> v) { return residual(grid, law, unpack(v)); };
  std::vector<double> f = eval(u);
  double fnorm = max_abs(f);
  double last_step = 0.0;

  for (int it = 0;; ++it) {
    rep.residual_history.push_back(fnorm);
    const bool polished = it == 0 || last_step <= 1e-6 * max_abs(u) + cfg.tol_residual;
    if (fnorm <= cfg.tol_residual && polished) {
      rep.state = unpack(u);
      rep.iterations = it;
      rep.residual_norm = fnorm;
      rep.classification = classify(rep.state);
      return rep;
    }
    if (it == cfg.max_iter || !std::isfinite(fnorm)) break;

    const BandLU lu(jacobian(grid, law, unpack(u)));
    std::vector<double> step(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) step[i] = -f[i];
    lu.solve_in_place(step);

    double alpha = 1.0;
    std::vector<double> trial(u.size()), f_trial;
    for (;;) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + alpha * step[i];
      f_trial = eval(trial);
      const double tn = max_abs(f_trial);
      if ((std::isfinite(tn) && tn <= (1.0 - 1e-4 * alpha) * fnorm) || alpha <= cfg.min_damping) break;
      alpha *= 0.5;
    }
    u.swap(trial);
    f.swap(f_trial);
    fnorm = max_abs(f);
    last_step = alpha * max_abs(step);
    rep.step_history.push_back(last_step);
    rep.final_damping = alpha;
  }

  std::ostringstream msg;
  msg << "newton: no convergence after " << cfg.max_iter << " iterations; residual history:";
  for (double r : rep.residual_history) msg << ' ' << r;
  throw Error(ErrorCode::NonConvergence, msg.str());
}

NewtonReport newton_solve(const RadialGrid& grid, const NonlinearityModel& model, double lambda,
                          const SystemState& init, const NewtonConfig& cfg) {
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorCode::Domain, "newton: lambda must be >= 0");
  return newton_solve(grid, model_law(model, lambda), init, cfg);
}

NewtonReport solve_limit_problem(const RadialGrid& grid, const NonlinearityModel& model,
                                 const SystemState& init, const NewtonConfig& cfg) {
  const auto& p = model.params();
  require(p.b1 > 0.0 && p.b2 > 0.0 && p.p1 > 1.0 && p.p2 > 1.0, ErrorCode::Domain,
          "limit problem needs b1, b2 > 0 and p1, p2 > 1");
  auto rep = newton_solve(grid, limit_law(model), init, cfg);
  if (rep.classification == StateClass::Trivial) {
    throw Error(ErrorCode::CollapsedToZero,
                "limit problem: Newton collapsed to the trivial state; retry with a larger initial amplitude");
  }
  return rep;
}

NewtonReport solve_limit_problem_sweep(const RadialGrid& grid, const NonlinearityModel& model,
                                       const SteklovPair& steklov, const NewtonConfig& cfg,
                                       std::span<const double> amplitudes) {
  static constexpr std::array<double, 4> kDefault{0.5, 1.0, 2.0, 4.0};
  if (amplitudes.empty()) amplitudes = kDefault;
  std::string last_error = "no amplitudes tried";
  for (double c : amplitudes) {
    SystemState init{steklov.phi1, steklov.phi1};
    for (double& v : init.u1) v *= c;
    for (double& v : init.u2) v *= c;
    try {
      auto rep = solve_limit_problem(grid, model, init, cfg);
      if (rep.classification == StateClass::Positive) return rep;
      last_error = "amplitude " + std::to_string(c) + " gave a non-positive state";
    } catch (const Error& e) {
      if (e.is_usage_error()) throw;
      last_error = e.what();
    }
  }
  throw Error(ErrorCode::CollapsedToZero, "limit problem: amplitude sweep found no positive solution (" +
                                              last_error + ")");
}

SystemState linear_bvp_solve(const FluxOperator& op, double flux1, double flux2) {
  return {op.solve(flux1), op.solve(flux2)};
}

SystemState linear_bvp_solve(const RadialGrid& grid, double flux1, double flux2) {
  return linear_bvp_solve(FluxOperator(grid), flux1, flux2);
}

}  // namespace radbif
