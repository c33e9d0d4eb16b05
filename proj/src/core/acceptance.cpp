#include "core/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "core/analysis.hpp"
#include "core/continuation.hpp"
#include "core/errors.hpp"
#include "core/monotone.hpp"
#include "core/solver.hpp"
#include "core/steklov.hpp"

namespace radbif {

namespace {

const double kMu1Exact = 2.0 / (std::exp(2.0) - 1.0);

struct Context {
  AcceptanceOptions opts;
  NonlinearityModel reference = NonlinearityModel::reference();
  RadialGrid grid;
  SteklovPair steklov;
  std::optional<Branch> branch;  // full reference branch down to lambda = 1e-3

  explicit Context(const AcceptanceOptions& o)
      : opts(o), grid(3, 1.0, o.intervals), steklov(steklov_eigenpair(grid)) {}

  const Branch& reference_branch() {
    if (!branch) {
      ContinuationConfig cfg;
      cfg.ds0 = 0.01;
      cfg.ds_max = 0.5;
      cfg.lambda_stop_low = 1e-3;
      cfg.eps_step_off = 1e-3;
      branch = continue_branch(grid, reference, steklov, cfg);
    }
    return *branch;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

CriterionResult steklov_oracle(Context&) {
  CriterionResult r{1, "Steklov eigenvalue vs closed form and O(h^2) convergence", false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const double mu = steklov_eigenpair(RadialGrid(3, 1.0, 2048)).mu1;
  const double err = std::abs(mu - kMu1Exact);
  std::vector<double> errs;
  for (int m : {256, 512, 1024}) errs.push_back(std::abs(steklov_eigenpair(RadialGrid(3, 1.0, m)).mu1 - kMu1Exact));
  const double q1 = errs[0] / errs[1], q2 = errs[1] / errs[2];
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = err <= 1e-6 && std::abs(q1 - 4.0) <= 0.6 && std::abs(q2 - 4.0) <= 0.6 && secs < 5.0;
  r.detail = "mu1(2048)=" + fmt("%.10f", mu) + " err=" + fmt("%.2e", err) + " ratios=" + fmt("%.3f", q1) + "," +
             fmt("%.3f", q2);
  return r;
}

CriterionResult bifurcation_point_check(Context& ctx) {
  CriterionResult r{2, "step-off converges to mu0 along the Steklov tangent", false, {}, 0.0};
  const double mu0 = bifurcation_point(ctx.reference, ctx.steklov.mu1);
  const auto tangent = initial_tangent(ctx.reference, ctx.steklov);
  std::vector<double> dev;
  double tangent_err = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    ContinuationConfig cfg;
    cfg.eps_step_off = eps;
    cfg.ds0 = cfg.ds_max = 0.5 * eps;
    cfg.ds_min = 1e-3 * eps;
    cfg.max_points = 10;
    const Branch b = continue_branch(ctx.grid, ctx.reference, ctx.steklov, cfg);
    double d = 0.0;
    for (const auto& p : b.points) d = std::max(d, std::abs(p.lambda - mu0));
    if (b.points.size() < 10) d = INFINITY;
    dev.push_back(d);
    if (eps == 1e-5) {
      const auto& p = b.points.front();
      for (std::size_t j = 0; j < p.state.u1.size(); ++j) {
        tangent_err = std::max(tangent_err, std::abs(p.state.u1[j] / p.norm - tangent.u1[j]));
        tangent_err = std::max(tangent_err, std::abs(p.state.u2[j] / p.norm - tangent.u2[j]));
      }
    }
  }
  r.passed = dev[0] <= 1e-3 && dev[1] <= 1e-3 && dev[2] <= 1e-3 && dev[1] < dev[0] && dev[2] < dev[1] &&
             tangent_err <= 1e-2;
  r.detail = "max|lambda-mu0| over 10 points: " + fmt("%.2e", dev[0]) + ", " + fmt("%.2e", dev[1]) + ", " +
             fmt("%.2e", dev[2]) + "; tangent err " + fmt("%.2e", tangent_err);
  return r;
}

CriterionResult slope_check(Context& ctx) {
  CriterionResult r{3, "direction of bifurcation and small-amplitude slope", false, {}, 0.0};
  auto fitted = [&ctx](const NonlinearityModel& model, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    ContinuationConfig cfg;
    cfg.eps_step_off = 1e-4;
    cfg.ds0 = 1e-3;
    cfg.ds_max = 4e-3;
    cfg.max_points = 40;
    const Branch b = continue_branch(ctx.grid, model, ctx.steklov, cfg);
    const double mu0 = bifurcation_point(model, ctx.steklov.mu1);
    const double v = slope_fit(b, mu0, model.nu()).intercept;
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
  };
  double t_ref = 0.0, t_left = 0.0;
  const double ref = fitted(ctx.reference, t_ref);
  const auto left = NonlinearityModel::left();
  const double left_fit = fitted(left, t_left);
  const double left_pred = slope_prediction(left, ctx.steklov).upper;
  const bool ref_ok = std::abs(ref - (-0.03913)) <= 0.05 * 0.03913;
  const bool left_ok = left_fit > 0.0 && std::abs(left_fit - left_pred) <= 0.05 * std::abs(left_pred);
  r.passed = ref_ok && left_ok && t_ref < 60.0 && t_left < 60.0 &&
             direction_of_bifurcation(ctx.reference) == Direction::Right &&
             direction_of_bifurcation(left) == Direction::Left;
  r.detail = "reference fit " + fmt("%.6f", ref) + " (target -0.03913); left fit " + fmt("%.6f", left_fit) +
             " vs predicted " + fmt("%.6f", left_pred);
  return r;
}

CriterionResult theta_check(Context& ctx) {
  CriterionResult r{4, "rescaling exponents", false, {}, 0.0};
  const auto th = theta_exponents(ctx.reference);
  const auto& p = ctx.reference.params();
  const double res1 = std::abs(1.0 + th.theta2 - th.theta1 * p.p1);
  const double res2 = std::abs(1.0 + th.theta1 - th.theta2 * p.p2);
  // Exact rational form for integer exponents: theta1 = (p2+1)/(p1 p2 - 1), theta2 = (p1+1)/(p1 p2 - 1).
  const long p1 = std::lround(p.p1), p2 = std::lround(p.p2);
  const long den = p1 * p2 - 1;
  const long g1 = std::gcd(p2 + 1, den), g2 = std::gcd(p1 + 1, den);
  const bool rational = (p2 + 1) / g1 == 4 && den / g1 == 5 && (p1 + 1) / g2 == 3 && den / g2 == 5;
  r.passed = rational && res1 <= 1e-12 && res2 <= 1e-12;
  r.detail = "theta=(" + fmt("%.15g", th.theta1) + ", " + fmt("%.15g", th.theta2) + ") residuals " +
             fmt("%.1e", res1) + ", " + fmt("%.1e", res2);
  return r;
}

CriterionResult rescale_criterion(Context& ctx) {
  CriterionResult r{5, "bifurcation from infinity: rescaled tail vs limit problem", false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Branch& b = ctx.reference_branch();
  const auto limit = solve_limit_problem_sweep(ctx.grid, ctx.reference, ctx.steklov);
  const auto theta = theta_exponents(ctx.reference);
  const auto table = rescale_check(b, theta, limit.state);
  const auto perturbed = rescale_check(b, {theta.theta1 + 0.1, theta.theta2 + 0.1}, limit.state);
  const auto& hi = perturbed.rows.front();
  const auto& lo = perturbed.rows.back();
  const double drift = std::max(std::abs(lo.ratio1 / hi.ratio1 - 1.0), std::abs(lo.ratio2 / hi.ratio2 - 1.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& end = table.rows.back();
  const auto& start = table.rows.front();
  r.passed = table.passed() && drift > 0.2 && start.lambda >= 0.5e-2 && end.lambda <= 1e-3 + 1e-15 && secs < 180.0;
  r.detail = "lambda=" + fmt("%.3g", end.lambda) + " ratios " + fmt("%.5f", end.ratio1) + ", " +
             fmt("%.5f", end.ratio2) + (table.monotone ? " (monotone)" : " (NOT monotone)") +
             "; from lambda=" + fmt("%.3g", start.lambda) + " ratios " + fmt("%.5f", start.ratio1) + ", " +
             fmt("%.5f", start.ratio2) + "; theta+0.1 drift " + fmt("%.3f", drift);
  return r;
}

CriterionResult nonexistence_check(Context& ctx) {
  CriterionResult r{6, "no positive solutions above mu1/K", false, {}, 0.0};
  const double bound = nonexistence_bound(ctx.reference, ctx.steklov.mu1);
  int positive = 0, tried = 0;
  for (double factor : {1.01, 1.5, 3.0}) {
    for (int k = 0; k < 20; ++k) {
      const double amp = std::pow(10.0, -2.0 + 4.0 * k / 19.0);
      SystemState init{ctx.steklov.phi1, ctx.steklov.phi1};
      for (double& v : init.u1) v *= amp;
      for (double& v : init.u2) v *= amp;
      ++tried;
      try {
        const auto rep = newton_solve(ctx.grid, ctx.reference, factor * bound, init);
        if (rep.classification == StateClass::Positive) ++positive;
      } catch (const Error&) {
      }
    }
  }
  double max_lambda = 0.0;
  for (const auto& p : ctx.reference_branch().points) max_lambda = std::max(max_lambda, p.lambda);
  r.passed = positive == 0 && max_lambda <= bound + 1e-8;
  r.detail = std::to_string(positive) + "/" + std::to_string(tried) + " starts gave a positive solution; max branch lambda " +
             fmt("%.7f", max_lambda) + " <= mu1/K = " + fmt("%.7f", bound);
  return r;
}

CriterionResult multiplicity_check(Context& ctx) {
  CriterionResult r{7, "two positive solutions between mu0 and the fold", false, {}, 0.0};
  const Branch& b = ctx.reference_branch();
  const auto fold = detect_fold(b);
  if (!fold) {
    r.detail = "no fold found";
    return r;
  }
  const double mu0 = b.mu0;
  const double lambda = 0.5 * (mu0 + fold->lambda);
  const auto states = solutions_at(b, lambda, ctx.grid, ctx.reference);
  const auto sub = build_subsolution(ctx.grid, ctx.reference, ctx.steklov, lambda,
                                     default_subsolution_eps(ctx.reference));
  const auto minimal = monotone_iterate(ctx.grid, ctx.reference, lambda, sub.state, std::nullopt);

  bool gap_ok = states.size() >= 2;
  double min_gap = INFINITY;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double a = pair_norm(states[i]), c = pair_norm(states[j]);
      min_gap = std::min(min_gap, std::abs(a - c) / std::max(a, c));
    }
  gap_ok = gap_ok && min_gap > 1e-3;

  double worst_order = -INFINITY, worst_res = minimal.residual_norm;
  for (const auto& s : states) {
    worst_res = std::max(worst_res, max_abs(residual(ctx.grid, ctx.reference, lambda, s)));
    for (std::size_t j = 0; j < s.u1.size(); ++j) {
      worst_order = std::max({worst_order, minimal.state.u1[j] - s.u1[j], minimal.state.u2[j] - s.u2[j]});
    }
  }
  r.passed = gap_ok && worst_order <= 1e-8 && worst_res <= 1e-10 && minimal.min_increment >= -1e-12;
  r.detail = "lambda=" + fmt("%.7f", lambda) + " (fold " + fmt("%.7f", fold->lambda) + "): " +
             std::to_string(states.size()) + " states, rel gap " + fmt("%.3g", min_gap) + ", max(min - u) " +
             fmt("%.2e", worst_order) + ", max residual " + fmt("%.2e", worst_res) + ", " +
             std::to_string(minimal.iterations) + " monotone iterations";
  return r;
}

CriterionResult jacobian_check(Context& ctx) {
  CriterionResult r{8, "analytic Jacobian vs central differences", false, {}, 0.0};
  const RadialGrid grid(3, 1.0, 128);
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> val(0.05, 3.0), lam(0.05, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SystemState s = SystemState::zeros(grid);
    for (double& v : s.u1) v = val(rng);
    for (double& v : s.u2) v = val(rng);
    const double lambda = lam(rng);
    const auto jac = jacobian(grid, ctx.reference, lambda, s);
    auto u = pack(s);
    const std::size_t n = u.size();
    for (std::size_t col = 0; col < n; ++col) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[col]));
      const double keep = u[col];
      u[col] = keep + h;
      const auto fp = residual(grid, ctx.reference, lambda, unpack(u));
      u[col] = keep - h;
      const auto fm = residual(grid, ctx.reference, lambda, unpack(u));
      u[col] = keep;
      for (std::size_t row = 0; row < n; ++row) {
        const double fd = (fp[row] - fm[row]) / (2.0 * h);
        const double an = jac(row, col);
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
      }
    }
  }
  r.passed = worst <= 1e-6;
  r.detail = "max relative entry error " + fmt("%.2e", worst);
  return r;
}

CriterionResult jordan_check(Context&) {
  CriterionResult r{9, "P J P^-1 = A for random slopes", false, {}, 0.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    double a = 0.0, b = 0.0;
    while (a == 0.0) a = 10.0 - d(rng);  // (0, 10]
    while (b == 0.0) b = 10.0 - d(rng);
    const auto model = NonlinearityModel::from_coefficients({a, 1.0}, {b, 1.0}, {});
    worst = std::max(worst, jordan_data(model).identity_error);
  }
  r.passed = worst <= 1e-12;
  r.detail = "max |PJP^-1 - A| = " + fmt("%.2e", worst);
  return r;
}

}  // namespace

std::string format_result_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %d. ", r.passed ? "PASS" : "FAIL", r.id);
  std::ostringstream os;
  os << head << r.name << " | " << r.detail << " (" << fmt("%.2f", r.seconds) << " s)";
  return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)(Context&);
  static constexpr Check checks[] = {steklov_oracle,     bifurcation_point_check, slope_check,
                                     theta_check,        rescale_criterion,       nonexistence_check,
                                     multiplicity_check, jacobian_check,          jordan_check};
  static const char* const names[] = {"Steklov eigenvalue", "bifurcation point", "slope", "theta", "rescaling",
                                      "nonexistence",       "multiplicity",      "jacobian", "jordan"};
  Context ctx(opts);
  std::vector<CriterionResult> results;
  for (int i = 0; i < 9; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = checks[i](ctx);
    } catch (const std::exception& e) {
      r = {i + 1, names[i], false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace radbif
