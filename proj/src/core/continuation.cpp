#include "core/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace radbif {

namespace {

double weighted_dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc / static_cast<double>(a.size());
}

struct CorrectorResult {
  bool converged = false;
  int iterations = 0;
  std::vector<double> u;
  double lambda = 0.0;
};

// Newton on {F(U, lambda) = 0, <U - U_pred, dir_u>_w + (lambda - lambda_pred) dir_l = 0},
// solved by bordering the banded Jacobian.
CorrectorResult correct(const RadialGrid& grid, const NonlinearityModel& model, std::vector<double> u,
                        double lambda, std::span<const double> dir_u, double dir_l,
                        const ContinuationConfig& cfg) {
  const std::vector<double> u_pred = u;
  const double lambda_pred = lambda;
  const double tol = cfg.newton.tol_residual;
  CorrectorResult out;
  double last_step = 0.0;
  for (int it = 0; it <= cfg.corrector_max_iter; ++it) {
    const SystemState s = unpack(u);
    const auto f = residual(grid, model, lambda, s);
    double constraint = (lambda - lambda_pred) * dir_l;
    {
      std::vector<double> du(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) du[i] = u[i] - u_pred[i];
      constraint += weighted_dot(du, dir_u);
    }
    const double fn = max_abs(f);
    if (!std::isfinite(fn) || !std::isfinite(lambda)) return out;
    const bool polished = it == 0 ? false : last_step <= 1e-6 * max_abs(u) + tol;
    if (fn <= tol && std::abs(constraint) <= tol && polished) {
      out.converged = true;
      out.iterations = it;
      out.u = std::move(u);
      out.lambda = lambda;
      return out;
    }
    if (it == cfg.corrector_max_iter) break;

    const BandLU lu(jacobian(grid, model, lambda, s));
    std::vector<double> a(f.size()), b = lambda_derivative(grid, model, s);
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = -f[i];
    for (double& v : b) v = -v;
    lu.solve_in_place(a);
    lu.solve_in_place(b);
    const double denom = weighted_dot(dir_u, b) + dir_l;
    if (denom == 0.0 || !std::isfinite(denom)) return out;
    const double dl = (-constraint - weighted_dot(dir_u, a)) / denom;
    double step = std::abs(dl);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double du = a[i] + dl * b[i];
      u[i] += du;
      step = std::max(step, std::abs(du));
    }
    lambda += dl;
    last_step = step;
  }
  return out;
}

BranchPoint make_point(std::vector<double> u, double lambda) {
  BranchPoint p;
  p.lambda = lambda;
  p.state = unpack(u);
  p.norm = pair_norm(p.state);
  return p;
}

bool verified(const RadialGrid& grid, const NonlinearityModel& model, const BranchPoint& p, double tol) {
  return max_abs(residual(grid, model, p.lambda, p.state)) <= tol;
}

}  // namespace

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::LambdaStopLow: return "lambda_stop_low";
    case Termination::MaxPoints: return "max_points";
    case Termination::CorrectorFailure: return "corrector_failure";
    case Termination::NonPositive: return "non_positive";
  }
  return "unknown";
}

double weighted_distance(const SystemState& a, double lambda_a, const SystemState& b, double lambda_b) {
  const auto pa = pack(a), pb = pack(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) acc += (pa[i] - pb[i]) * (pa[i] - pb[i]);
  const double dl = lambda_a - lambda_b;
  return std::sqrt(acc / static_cast<double>(pa.size()) + dl * dl);
}

SystemState initial_tangent(const NonlinearityModel& model, const SteklovPair& steklov) {
  const double zeta = model.zeta();
  SystemState t{steklov.phi1, steklov.phi1};
  for (double& v : t.u1) v /= 1.0 + zeta;
  for (double& v : t.u2) v *= zeta / (1.0 + zeta);
  return t;
}

BranchPoint step_off(const RadialGrid& grid, const NonlinearityModel& model, double mu0,
                     const SystemState& tangent, double eps, const ContinuationConfig& cfg) {
  require(eps > 0.0 && eps <= 0.1, ErrorCode::Domain, "step_off: eps must lie in (0, 0.1]");
  auto dir = pack(tangent);
  const double scale = std::sqrt(weighted_dot(dir, dir));
  require(scale > 0.0, ErrorCode::Domain, "step_off: zero tangent");
  for (double& v : dir) v /= scale;
  std::vector<double> u = pack(tangent);
  for (double& v : u) v *= eps;

  auto res = correct(grid, model, std::move(u), mu0, dir, 0.0, cfg);
  if (!res.converged) {
    throw Error(ErrorCode::StepOff, "step_off: corrector did not converge at eps = " + std::to_string(eps));
  }
  BranchPoint p = make_point(std::move(res.u), res.lambda);
  p.corrector_iterations = res.iterations;
  p.ds = eps;
  if (classify(p.state) != StateClass::Positive) {
    throw Error(ErrorCode::StepOff, "step_off: corrector collapsed to a trivial or non-positive state; "
                                    "increase eps");
  }
  return p;
}

Branch continue_branch(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                       const ContinuationConfig& cfg) {
  require(cfg.lambda_stop_low > 0.0, ErrorCode::Config, "continuation: lambda_stop_low must be positive");
  require(cfg.ds_min > 0.0 && cfg.ds_min <= cfg.ds0 && cfg.ds0 <= cfg.ds_max, ErrorCode::Config,
          "continuation: need 0 < ds_min <= ds0 <= ds_max");
  require(cfg.max_points >= 1, ErrorCode::Config, "continuation: max_points must be positive");

  Branch branch;
  const double sigma = std::sqrt(model.slope_at_zero(Component::First) * model.slope_at_zero(Component::Second));
  branch.mu0 = steklov.mu1 / sigma;

  BranchPoint first = step_off(grid, model, branch.mu0, initial_tangent(model, steklov), cfg.eps_step_off, cfg);
  first.tangent_lambda_sign = first.lambda > branch.mu0 ? 1 : (first.lambda < branch.mu0 ? -1 : 0);
  branch.points.push_back(first);

  std::vector<double> u_prev = pack(SystemState::zeros(grid));
  double l_prev = branch.mu0;
  double ds = cfg.ds0;
  bool any_step = false;
  branch.reason = Termination::MaxPoints;

  while (static_cast<int>(branch.points.size()) < cfg.max_points) {
    const BranchPoint& cur = branch.points.back();
    const auto u_cur = pack(cur.state);
    std::vector<double> dir(u_cur.size());
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = u_cur[i] - u_prev[i];
    double dir_l = cur.lambda - l_prev;
    const double len = std::sqrt(weighted_dot(dir, dir) + dir_l * dir_l);
    for (double& v : dir) v /= len;
    dir_l /= len;

    std::vector<double> u_pred(u_cur.size());
    for (std::size_t i = 0; i < u_pred.size(); ++i) u_pred[i] = u_cur[i] + ds * dir[i];
    auto res = correct(grid, model, std::move(u_pred), cur.lambda + ds * dir_l, dir, dir_l, cfg);

    if (!res.converged) {
      ds *= 0.5;
      if (ds < cfg.ds_min) {
        if (!any_step) {
          throw Error(ErrorCode::Continuation, "continuation: corrector failed on the first step; last good lambda = " +
                                                   std::to_string(cur.lambda));
        }
        branch.reason = Termination::CorrectorFailure;
        break;
      }
      continue;
    }

    BranchPoint next = make_point(std::move(res.u), res.lambda);
    next.corrector_iterations = res.iterations;
    if (classify(next.state) != StateClass::Positive || !verified(grid, model, next, cfg.newton.tol_residual)) {
      branch.reason = Termination::NonPositive;
      break;
    }

    if (next.lambda <= cfg.lambda_stop_low) {
      // Land exactly on lambda_stop_low by a fixed-lambda solve from the interpolated state.
      const double w = (cfg.lambda_stop_low - cur.lambda) / (next.lambda - cur.lambda);
      const auto u_next = pack(next.state);
      std::vector<double> u_mid(u_cur.size());
      for (std::size_t i = 0; i < u_mid.size(); ++i) u_mid[i] = (1.0 - w) * u_cur[i] + w * u_next[i];
      try {
        auto rep = newton_solve(grid, model, cfg.lambda_stop_low, unpack(u_mid), cfg.newton);
        if (rep.classification == StateClass::Positive) {
          next = make_point(pack(rep.state), cfg.lambda_stop_low);
          next.corrector_iterations = rep.iterations;
        }
      } catch (const Error&) {
        // keep the overshooting corrector point
      }
      next.tangent_lambda_sign = next.lambda > cur.lambda ? 1 : -1;
      next.ds = weighted_distance(next.state, next.lambda, cur.state, cur.lambda);
      next.arclength = cur.arclength + next.ds;
      branch.points.push_back(std::move(next));
      branch.reason = Termination::LambdaStopLow;
      break;
    }

    next.tangent_lambda_sign = next.lambda > cur.lambda ? 1 : (next.lambda < cur.lambda ? -1 : 0);
    next.ds = ds;
    next.arclength = cur.arclength + weighted_distance(next.state, next.lambda, cur.state, cur.lambda);
    u_prev = u_cur;
    l_prev = cur.lambda;
    branch.points.push_back(std::move(next));
    any_step = true;

    if (res.iterations <= 3) ds = std::min(2.0 * ds, cfg.ds_max);
    else if (res.iterations >= 8) ds = std::max(0.5 * ds, cfg.ds_min);
  }

  branch.folds = detect_folds(branch);
  branch.fold = detect_fold(branch);
  return branch;
}

std::vector<Fold> detect_folds(const Branch& branch) {
  std::vector<Fold> folds;
  const auto& pts = branch.points;
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const double d0 = pts[k].lambda - pts[k - 1].lambda;
    const double d1 = pts[k + 1].lambda - pts[k].lambda;
    if (d0 * d1 >= 0.0) continue;
    // Quadratic through (s, lambda) at k-1, k, k+1.
    const double s0 = pts[k - 1].arclength, s1 = pts[k].arclength, s2 = pts[k + 1].arclength;
    const double l0 = pts[k - 1].lambda, l1 = pts[k].lambda, l2 = pts[k + 1].lambda;
    const double q01 = (l1 - l0) / (s1 - s0), q12 = (l2 - l1) / (s2 - s1);
    const double a = (q12 - q01) / (s2 - s0);
    const double b = q01 - a * (s0 + s1);
    const double c = l0 - a * s0 * s0 - b * s0;
    Fold f;
    f.index = k;
    f.is_maximum = d0 > 0.0;
    double value = l1;
    if (a != 0.0 && std::isfinite(a)) {
      const double s_star = -b / (2.0 * a);
      if (s_star >= s0 && s_star <= s2) value = c - b * b / (4.0 * a);
    }
    f.lambda = f.is_maximum ? std::max(value, l1) : std::min(value, l1);
    folds.push_back(f);
  }
  return folds;
}

std::optional<Fold> detect_fold(const Branch& branch) {
  std::optional<Fold> best;
  for (const auto& f : detect_folds(branch)) {
    if (f.is_maximum && (!best || f.lambda > best->lambda)) best = f;
  }
  return best;
}

std::vector<SystemState> solutions_at(const Branch& branch, double lambda, const RadialGrid& grid,
                                      const NonlinearityModel& model, const NewtonConfig& cfg) {
  require(lambda > 0.0, ErrorCode::Domain, "solutions_at: lambda must be positive");
  std::vector<SystemState> found;
  std::vector<double> norms;
  const auto& pts = branch.points;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k].lambda - lambda, b = pts[k + 1].lambda - lambda;
    if (a * b > 0.0 || pts[k].lambda == pts[k + 1].lambda) continue;
    const double w = (lambda - pts[k].lambda) / (pts[k + 1].lambda - pts[k].lambda);
    const auto u0 = pack(pts[k].state), u1 = pack(pts[k + 1].state);
    std::vector<double> u(u0.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = (1.0 - w) * u0[i] + w * u1[i];
    try {
      auto rep = newton_solve(grid, model, lambda, unpack(u), cfg);
      if (rep.classification != StateClass::Positive) continue;
      const double n = pair_norm(rep.state);
      const bool duplicate = std::any_of(norms.begin(), norms.end(), [n](double m) {
        return std::abs(n - m) <= kDistinctGap * std::max(n, m);
      });
      if (duplicate) continue;
      norms.push_back(n);
      found.push_back(std::move(rep.state));
    } catch (const Error& e) {
      if (e.is_usage_error()) throw;
    }
  }
  return found;
}

}  // namespace radbif
