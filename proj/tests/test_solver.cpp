#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/solver.hpp"
#include "support.hpp"

using namespace radbif;
using namespace radbif::testing;

namespace {

SystemState scaled(const std::vector<double>& phi, double a, double b) {
  SystemState s{phi, phi};
  for (auto& v : s.u1) v *= a;
  for (auto& v : s.u2) v *= b;
  return s;
}

}  // namespace

TEST_CASE("residual at trivial and kernel states") {
  const RadialGrid g(3, 1.0, 128);
  const auto m = NonlinearityModel::reference();
  for (double v : residual(g, m, 0.7, SystemState::zeros(g))) CHECK(v == 0.0);

  const auto pair = steklov_eigenpair(g);
  const auto r = residual(g, m, 0.0, scaled(pair.phi1, 2.0, 2.0));
  const std::size_t n = g.nodes() - 1;
  for (std::size_t k = 0; k < 2 * n; ++k) CHECK(std::abs(r[k]) <= 1e-12);
  CHECK(r[2 * n] == doctest::Approx(2.0 * pair.mu1).epsilon(1e-10));
  CHECK(r[2 * n + 1] == doctest::Approx(2.0 * pair.mu1).epsilon(1e-10));
  CHECK_THROWS_AS(residual(g, m, 0.1, SystemState{{1.0}, {1.0}}), Error);
}

TEST_CASE("jacobian coupling entries") {
  const RadialGrid g(3, 1.0, 32);
  const auto m = NonlinearityModel::reference();
  const std::size_t n = g.nodes() - 1;
  const auto j0 = jacobian(g, m, 0.0, SystemState::zeros(g));
  CHECK(j0(2 * n, 2 * n + 1) == 0.0);
  CHECK(j0(2 * n + 1, 2 * n) == 0.0);
  const auto jz = jacobian(g, m, 0.4, SystemState::zeros(g));
  CHECK(jz(2 * n, 2 * n + 1) == doctest::Approx(-0.4));
  CHECK(jz(2 * n + 1, 2 * n) == doctest::Approx(-0.4));
}

TEST_CASE("jacobian matches central differences on random positive states") {
  const RadialGrid g(3, 1.0, 128);
  const auto m = NonlinearityModel::reference();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> val(0.05, 3.0), lam(0.05, 0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SystemState s = SystemState::zeros(g);
    for (std::size_t j = 0; j < g.nodes(); ++j) {
      s.u1[j] = val(rng);
      s.u2[j] = val(rng);
    }
    const double l = lam(rng);
    const auto jac = jacobian(g, m, l, s);
    auto x = pack(s);
    for (std::size_t col = 0; col < x.size(); ++col) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[col]));
      auto xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      const auto rp = residual(g, m, l, unpack(xp)), rm = residual(g, m, l, unpack(xm));
      for (std::size_t row = 0; row < x.size(); ++row) {
        const double fd = (rp[row] - rm[row]) / (2 * h);
        const double an = jac.in_band(row, col) ? jac(row, col) : 0.0;
        const double scale = std::max(1.0, std::abs(an));
        worst = std::max(worst, std::abs(fd - an) / scale);
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("Newton reproduces the radial algebraic solutions") {
  const auto& run = reference_run();
  const double mu = run.steklov.mu1;
  const auto upper = radial_pair(run.model, mu, 0.32, 0.5, 0.6);
  const auto lower = radial_pair(run.model, mu, 0.32, 0.08, 0.09);
  // continuous-limit values of the same pairs
  CHECK(upper.first == doctest::Approx(0.49480598957654696).epsilon(1e-4));
  CHECK(lower.first == doctest::Approx(0.084336612320404765).epsilon(1e-4));

  for (auto [x, y] : {upper, lower}) {
    const auto rep = newton_solve(run.grid, run.model, 0.32, scaled(run.steklov.phi1, 1.1 * x, 0.9 * y));
    CHECK(rep.classification == StateClass::Positive);
    CHECK(rep.residual_norm <= 1e-10);
    CHECK(rep.state.u1.back() == doctest::Approx(x).epsilon(1e-9));
    CHECK(rep.state.u2.back() == doctest::Approx(y).epsilon(1e-9));
  }
}

TEST_CASE("Newton trivial start and negative lambda") {
  const RadialGrid g(3, 1.0, 64);
  const auto m = NonlinearityModel::reference();
  const auto rep = newton_solve(g, m, 0.2, SystemState::zeros(g));
  CHECK(rep.iterations == 0);
  CHECK(rep.classification == StateClass::Trivial);
  CHECK(pair_norm(rep.state) == 0.0);
  try {
    newton_solve(g, m, -1.0, SystemState::zeros(g));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("Newton near the fold has a quadratic tail") {
  const auto& run = reference_run();
  REQUIRE(run.branch.fold.has_value());
  const double lam = 0.99 * run.branch.fold->lambda;
  // predictor: upper-segment branch point whose lambda is closest to the target
  const BranchPoint* best = nullptr;
  for (std::size_t k = run.branch.fold->index; k < run.branch.points.size(); ++k) {
    const auto& p = run.branch.points[k];
    if (!best || std::abs(p.lambda - lam) < std::abs(best->lambda - lam)) best = &p;
  }
  REQUIRE(best != nullptr);
  const auto rep = newton_solve(run.grid, run.model, lam, best->state);
  CHECK(rep.classification == StateClass::Positive);
  CHECK(rep.residual_norm <= 1e-10);
  const auto& e = rep.step_history;
  REQUIRE(e.size() >= 2);
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    if (e[k + 1] < 1e-12) break;
    CHECK(e[k + 1] / (e[k] * e[k]) <= 1e3);
  }
  // radial reduction: u_i = u_i(R) phi1 with mu1 x = lam f1(y), mu1 y = lam f2(x)
  const double x = rep.state.u1.back(), y = rep.state.u2.back();
  CHECK(std::abs(run.steklov.mu1 * x - lam * eval_f(run.model, Component::First, y)) <= 1e-9);
  CHECK(std::abs(run.steklov.mu1 * y - lam * eval_f(run.model, Component::Second, x)) <= 1e-9);
  for (std::size_t j = 0; j < run.grid.nodes(); j += 64) CHECK(rep.state.u1[j] == doctest::Approx(x * run.steklov.phi1[j]));
}

TEST_CASE("no positive solutions above the nonexistence bound") {
  const RadialGrid g(3, 1.0, 128);
  const auto m = NonlinearityModel::reference();
  const auto pair = steklov_eigenpair(g);
  const double bound = pair.mu1 / m.params().K;
  for (double factor : {1.01, 1.5, 3.0}) {
    for (double amp : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
      try {
        const auto rep = newton_solve(g, m, factor * bound, scaled(pair.phi1, amp, amp));
        CHECK(rep.classification != StateClass::Positive);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonConvergence);
      }
    }
  }
}

TEST_CASE("grid convergence of a fixed-lambda solution is second order") {
  const auto m = NonlinearityModel::reference();
  double norms[3];
  int k = 0;
  for (int intervals : {256, 512, 1024}) {
    const RadialGrid g(3, 1.0, intervals);
    const auto pair = steklov_eigenpair(g);
    norms[k++] = pair_norm(newton_solve(g, m, 0.32, scaled(pair.phi1, 0.5, 0.6)).state);
  }
  const double order = std::log2((norms[0] - norms[1]) / (norms[1] - norms[2]));
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("limit problem") {
  const RadialGrid g(3, 1.0, 512);
  const auto m = NonlinearityModel::reference();
  try {
    solve_limit_problem(g, m, SystemState::zeros(g));
    FAIL("expected collapse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CollapsedToZero);
  }
  const auto pair = steklov_eigenpair(g);
  const auto rep = solve_limit_problem_sweep(g, m, pair);
  CHECK(rep.residual_norm <= 1e-10);
  CHECK(rep.classification == StateClass::Positive);
  CHECK(sup_norm(rep.state.u1) == doctest::Approx(kLimitX).epsilon(1e-5));
  CHECK(sup_norm(rep.state.u2) == doctest::Approx(kLimitY).epsilon(1e-5));

  const RadialGrid fine(3, 1.0, 8192);
  const auto golden = solve_limit_problem_sweep(fine, m, steklov_eigenpair(fine));
  CHECK(pair_norm(golden.state) == doctest::Approx(kLimitX + kLimitY).epsilon(1e-8));
}
