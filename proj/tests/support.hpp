#pragma once

#include <cmath>

#include "core/continuation.hpp"
#include "core/model.hpp"
#include "core/steklov.hpp"

namespace radbif::testing {

// Exact first Steklov eigenvalue for N=3, R=1: 2/(e^2-1).
inline constexpr double kMu1 = 0.31303528549933135;
// Fold of the reference branch divided by mu1 (grid independent in the radial reduction).
inline constexpr double kFoldOverMu = 1.0644496575479080;
// Limit problem sup norms for the reference model.
inline constexpr double kLimitX = 0.59853924676502849;
inline constexpr double kLimitY = 0.57221860683627781;

struct ReferenceRun {
  RadialGrid grid{3, 1.0, 512};
  NonlinearityModel model = NonlinearityModel::reference();
  SteklovPair steklov;
  Branch branch;
};

// Reference branch at M=512, shared by the tests that need one.
inline const ReferenceRun& reference_run() {
  static const ReferenceRun run = [] {
    ReferenceRun r;
    r.steklov = steklov_eigenpair(r.grid);
    ContinuationConfig cfg;
    cfg.ds_max = 0.5;
    r.branch = continue_branch(r.grid, r.model, r.steklov, cfg);
    return r;
  }();
  return run;
}

// Solves mu x = lambda f1(y), mu y = lambda f2(x) by scalar Newton from (x0, y0).
inline std::pair<double, double> radial_pair(const NonlinearityModel& model, double mu, double lambda,
                                             double x0, double y0) {
  double x = x0, y = y0;
  for (int k = 0; k < 100; ++k) {
    const double r1 = mu * x - lambda * eval_f(model, Component::First, y);
    const double r2 = mu * y - lambda * eval_f(model, Component::Second, x);
    const double a = mu, b = -lambda * eval_df(model, Component::First, y);
    const double c = -lambda * eval_df(model, Component::Second, x), d = mu;
    const double det = a * d - b * c;
    const double dx = (d * r1 - b * r2) / det, dy = (a * r2 - c * r1) / det;
    x -= dx;
    y -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-15 * (1.0 + std::abs(x) + std::abs(y))) break;
  }
  return {x, y};
}

}  // namespace radbif::testing
