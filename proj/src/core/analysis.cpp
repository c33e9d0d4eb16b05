#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/grid.hpp"

namespace radbif {

const char* to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

double bifurcation_point(const NonlinearityModel& model, double mu1) {
  const double a = model.slope_at_zero(Component::First), b = model.slope_at_zero(Component::Second);
  require(a > 0.0 && b > 0.0, ErrorCode::Domain, "bifurcation_point: f_i'(0) must be positive");
  return mu1 / std::sqrt(a * b);
}

JordanData jordan_data(const NonlinearityModel& model) {
  JordanData d;
  const double a = model.slope_at_zero(Component::First), b = model.slope_at_zero(Component::Second);
  require(a > 0.0 && b > 0.0, ErrorCode::Domain, "jordan_data: f_i'(0) must be positive");
  d.sigma = std::sqrt(a * b);
  d.zeta = std::sqrt(b / a);
  const double z = d.zeta;
  d.A = {{{0.0, a}, {b, 0.0}}};
  d.J = {{{d.sigma, 0.0}, {0.0, -d.sigma}}};
  d.P = {{{1.0 / (1.0 + z), 1.0 / (1.0 + z)}, {z / (1.0 + z), -z / (1.0 + z)}}};
  const double det = d.P[0][0] * d.P[1][1] - d.P[0][1] * d.P[1][0];
  d.P_inv = {{{d.P[1][1] / det, -d.P[0][1] / det}, {-d.P[1][0] / det, d.P[0][0] / det}}};

  Mat2 pj{}, pjp{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) pj[i][j] += d.P[i][k] * d.J[k][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) pjp[i][j] += pj[i][k] * d.P_inv[k][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.identity_error = std::max(d.identity_error, std::abs(pjp[i][j] - d.A[i][j]));
  return d;
}

ThetaExponents theta_exponents(double p1, double p2) {
  const double det = p1 * p2 - 1.0;
  require(det > 0.0, ErrorCode::Domain, "theta_exponents: need p1 p2 > 1");
  return {(p2 + 1.0) / det, (p1 + 1.0) / det};
}

ThetaExponents theta_exponents(const NonlinearityModel& model) {
  return theta_exponents(model.params().p1, model.params().p2);
}

Direction direction_of_bifurcation(const R0Bounds& bounds) {
  if (bounds.under > 0.0) return Direction::Left;
  if (bounds.over < 0.0) return Direction::Right;
  return Direction::Indeterminate;
}

Direction direction_of_bifurcation(const NonlinearityModel& model) {
  return direction_of_bifurcation(r0_bounds(model));
}

SlopePrediction slope_prediction(const NonlinearityModel& model, const SteklovPair& steklov) {
  const auto r0 = r0_bounds(model);
  const double a = model.slope_at_zero(Component::First), b = model.slope_at_zero(Component::Second);
  const double sigma = std::sqrt(a * b);
  const double mu0 = bifurcation_point(model, steklov.mu1);
  // Surface integrals over the sphere reduce to powers of the boundary value.
  const double ratio = std::pow(steklov.phi1.back(), model.nu() - 1.0);
  return {mu0 / sigma * r0.under * ratio, mu0 / sigma * r0.over * ratio};
}

SlopeFit slope_fit(const Branch& branch, double mu0, double nu, double max_norm) {
  std::vector<double> xs, ys;
  for (const auto& p : branch.points) {
    if (p.norm <= 0.0 || p.norm >= max_norm) continue;
    xs.push_back(p.norm);
    ys.push_back((mu0 - p.lambda) / std::pow(p.norm, nu - 1.0));
  }
  require(xs.size() >= 5, ErrorCode::InsufficientData,
          "slope_fit: need at least 5 branch points with small norm, have " + std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.points = xs.size();
  return fit;
}

RescaleTable rescale_check(const Branch& branch, const ThetaExponents& theta, const SystemState& limit_solution,
                           double lambda_max, double tolerance) {
  const double w1 = sup_norm(limit_solution.u1), w2 = sup_norm(limit_solution.u2);
  require(w1 > 0.0 && w2 > 0.0, ErrorCode::Domain, "rescale_check: limit solution is trivial");
  RescaleTable table;
  for (const auto& p : branch.points) {
    if (p.lambda > lambda_max) continue;
    table.rows.push_back({p.lambda, std::pow(p.lambda, theta.theta1) * sup_norm(p.state.u1) / w1,
                          std::pow(p.lambda, theta.theta2) * sup_norm(p.state.u2) / w2});
  }
  require(table.rows.size() >= 2, ErrorCode::InsufficientData,
          "rescale_check: branch tail below lambda = " + std::to_string(lambda_max) + " has fewer than 2 points");
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const auto& a, const auto& b) { return a.lambda > b.lambda; });

  const auto& end = table.rows.back();
  table.endpoint_within_tolerance =
      std::abs(end.ratio1 - 1.0) <= tolerance && std::abs(end.ratio2 - 1.0) <= tolerance;
  table.monotone = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    table.monotone = table.monotone && std::abs(b.ratio1 - 1.0) <= std::abs(a.ratio1 - 1.0) + 1e-12 &&
                     std::abs(b.ratio2 - 1.0) <= std::abs(a.ratio2 - 1.0) + 1e-12;
  }
  return table;
}

double nonexistence_bound(const NonlinearityModel& model, double mu1) {
  require(model.params().K > 0.0, ErrorCode::Domain, "nonexistence_bound: K must be positive");
  return mu1 / model.params().K;
}

BifurcationReport build_report(const NonlinearityModel& model, const SteklovPair& steklov, const Branch* branch) {
  BifurcationReport r;
  r.mu1 = steklov.mu1;
  r.jordan = jordan_data(model);
  r.sigma = r.jordan.sigma;
  r.zeta = r.jordan.zeta;
  r.mu0 = bifurcation_point(model, steklov.mu1);
  try {
    r.theta = theta_exponents(model);
  } catch (const Error&) {
    r.theta.reset();
  }
  r.K_bound = model.params().K > 0.0 ? nonexistence_bound(model, steklov.mu1) : 0.0;
  r.r0 = r0_bounds(model);
  r.direction = direction_of_bifurcation(r.r0);
  r.slope_predicted = slope_prediction(model, steklov);
  if (branch != nullptr) {
    try {
      r.slope_fitted = slope_fit(*branch, r.mu0, model.nu()).intercept;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
    }
  }
  return r;
}

}  // namespace radbif
