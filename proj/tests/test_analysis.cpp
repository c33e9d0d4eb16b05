#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "core/analysis.hpp"
#include "core/errors.hpp"
#include "core/solver.hpp"
#include "support.hpp"

using namespace radbif;
using namespace radbif::testing;

TEST_CASE("bifurcation point") {
  const auto ref = NonlinearityModel::reference();
  CHECK(bifurcation_point(ref, kMu1) == doctest::Approx(kMu1).epsilon(1e-15));
  const auto m = NonlinearityModel::from_coefficients({4.0, 1.0}, {1.0, 1.0}, {});
  CHECK(bifurcation_point(m, kMu1) == doctest::Approx(kMu1 / 2).epsilon(1e-15));
  const auto lin = NonlinearityModel::linear();
  CHECK(bifurcation_point(lin, kMu1) == doctest::Approx(nonexistence_bound(lin, kMu1)));
  const auto flat = NonlinearityModel::from_coefficients({0.0, 1.0}, {1.0}, {});
  CHECK_THROWS_AS(bifurcation_point(flat, kMu1), Error);

  const auto jd = jordan_data(m);
  CHECK(bifurcation_point(m, kMu1) * jd.sigma == doctest::Approx(kMu1).epsilon(1e-12));
}

TEST_CASE("Jordan data") {
  const auto jd = jordan_data(NonlinearityModel::reference());
  CHECK(jd.sigma == 1.0);
  CHECK(jd.zeta == 1.0);
  CHECK(jd.P[0][0] == 0.5);
  CHECK(jd.P[0][1] == 0.5);
  CHECK(jd.P[1][0] == 0.5);
  CHECK(jd.P[1][1] == -0.5);
  CHECK(jd.identity_error <= 1e-14);

  const auto m = NonlinearityModel::from_coefficients({1.0, 1.0}, {4.0, 1.0}, {});
  const auto j2 = jordan_data(m);
  CHECK(j2.zeta == doctest::Approx(2.0));
  CHECK(j2.J[0][0] == doctest::Approx(2.0));
  CHECK(j2.J[1][1] == doctest::Approx(-2.0));
  CHECK(j2.J[0][1] == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(1e-3, 10.0);
  for (int k = 0; k < 100; ++k) {
    const auto rm = NonlinearityModel::from_coefficients({d(rng), 1.0}, {d(rng), 1.0}, {});
    CHECK(jordan_data(rm).identity_error <= 1e-12);
  }
}

TEST_CASE("theta exponents") {
  const auto t = theta_exponents(NonlinearityModel::reference());
  CHECK(t.theta1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(t.theta2 == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(std::abs(1 + t.theta2 - 2 * t.theta1) <= 1e-12);
  CHECK(std::abs(1 + t.theta1 - 3 * t.theta2) <= 1e-12);
  const auto s = theta_exponents(3.0, 3.0);
  CHECK(s.theta1 == doctest::Approx(0.5));
  CHECK(s.theta2 == doctest::Approx(0.5));
  const auto u = theta_exponents(2.0, 2.0);
  CHECK(u.theta1 == doctest::Approx(1.0));
  CHECK(u.theta2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(theta_exponents(1.0, 1.0), Error);
  CHECK_THROWS_AS(theta_exponents(0.5, 2.0), Error);
}

TEST_CASE("direction of bifurcation") {
  CHECK(direction_of_bifurcation(NonlinearityModel::reference()) == Direction::Right);
  CHECK(direction_of_bifurcation(NonlinearityModel::left()) == Direction::Left);
  CHECK(direction_of_bifurcation(NonlinearityModel::linear()) == Direction::Indeterminate);
  CHECK(direction_of_bifurcation(R0Bounds{-0.1, 0.2}) == Direction::Indeterminate);
  CHECK(r0_bounds(NonlinearityModel::left()).under == doctest::Approx(0.5));
}

TEST_CASE("slope prediction") {
  const RadialGrid g(3, 1.0, 2048);
  const auto pair = steklov_eigenpair(g);
  const auto ref = slope_prediction(NonlinearityModel::reference(), pair);
  CHECK(ref.exact());
  CHECK(ref.upper == doctest::Approx(-0.0391294).epsilon(1e-5));
  const auto lin = slope_prediction(NonlinearityModel::linear(), pair);
  CHECK(lin.upper == 0.0);
  // zeta = 1, nu = 2, equal remainder limits c: (mu0/sigma) c / 2
  const auto left = slope_prediction(NonlinearityModel::left(), pair);
  CHECK(left.upper == doctest::Approx(pair.mu1 / 2).epsilon(1e-12));
}

TEST_CASE("slope fit") {
  const auto& run = reference_run();
  // synthetic branch sitting at mu0
  Branch flat;
  for (int k = 1; k <= 8; ++k) {
    BranchPoint p;
    p.lambda = run.branch.mu0;
    p.norm = 0.01 * k;
    flat.points.push_back(p);
  }
  CHECK(slope_fit(flat, run.branch.mu0, 2.0).intercept == doctest::Approx(0.0).scale(1e-12));

  Branch sparse;
  sparse.points.assign(flat.points.begin(), flat.points.begin() + 3);
  try {
    slope_fit(sparse, run.branch.mu0, 2.0);
    FAIL("expected insufficient data");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
}

TEST_CASE("fitted slopes match predictions") {
  const RadialGrid g(3, 1.0, 512);
  const auto pair = steklov_eigenpair(g);
  ContinuationConfig cfg;
  cfg.eps_step_off = 1e-4;
  cfg.ds0 = 1e-3;
  cfg.ds_max = 4e-3;
  cfg.max_points = 40;
  for (const auto& m : {NonlinearityModel::reference(), NonlinearityModel::left()}) {
    const auto branch = continue_branch(g, m, pair, cfg);
    const auto fit = slope_fit(branch, branch.mu0, m.nu());
    const auto pred = slope_prediction(m, pair);
    CHECK(fit.intercept == doctest::Approx(pred.upper).epsilon(0.05));
    CHECK(std::signbit(fit.intercept) == std::signbit(pred.upper));
  }
}

TEST_CASE("rescaled tail approaches the limit solution") {
  const auto& run = reference_run();
  const auto limit = solve_limit_problem_sweep(run.grid, run.model, run.steklov);
  const auto theta = theta_exponents(run.model);
  const auto table = rescale_check(run.branch, theta, limit.state);
  CHECK(table.passed());
  REQUIRE(!table.rows.empty());
  CHECK(table.rows.front().lambda <= 1e-2);
  const auto& last = table.rows.back();
  CHECK(last.lambda == 1e-3);
  // exact radial algebra at lambda = 1e-3 gives ratios 0.99747 and 1.00822
  CHECK(last.ratio1 == doctest::Approx(0.99747).epsilon(1e-4));
  CHECK(last.ratio2 == doctest::Approx(1.00822).epsilon(1e-4));

  const auto off = rescale_check(run.branch, ThetaExponents{theta.theta1 + 0.1, theta.theta2 + 0.1}, limit.state);
  CHECK_FALSE(off.passed());
  REQUIRE(!off.rows.empty());
  CHECK(off.rows.front().ratio1 / off.rows.back().ratio1 > 1.2);

  Branch shortb;
  shortb.points.assign(run.branch.points.begin(), run.branch.points.begin() + 10);
  CHECK_THROWS_AS(rescale_check(shortb, theta, limit.state), Error);
}

TEST_CASE("nonexistence bound") {
  CHECK(nonexistence_bound(NonlinearityModel::reference(), kMu1) ==
        doctest::Approx(0.41738038066577513).epsilon(1e-14));
  const auto& run = reference_run();
  double top = 0.0;
  for (const auto& p : run.branch.points) top = std::max(top, p.lambda);
  CHECK(top < nonexistence_bound(run.model, run.steklov.mu1));
  CHECK_THROWS_AS(nonexistence_bound(NonlinearityModel::from_coefficients({0.0, 1.0}, {1.0, 1.0}, {}), kMu1), Error);
}

TEST_CASE("report") {
  const auto& run = reference_run();
  const auto rep = build_report(run.model, run.steklov, &run.branch);
  CHECK(rep.mu0 * rep.sigma == doctest::Approx(rep.mu1).epsilon(1e-12));
  REQUIRE(rep.theta.has_value());
  CHECK(rep.direction == Direction::Right);
  CHECK(rep.r0.over == -0.125);
  CHECK(rep.K_bound == doctest::Approx(4.0 / 3.0 * rep.mu1));
  // the coarse reference branch has too few small-norm points for a fit
  CHECK_FALSE(rep.slope_fitted.has_value());
}
