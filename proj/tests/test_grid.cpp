#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "core/banded.hpp"
#include "core/errors.hpp"
#include "core/grid.hpp"

using namespace radbif;

namespace {

std::vector<double> sample(const RadialGrid& g, double (*f)(double)) {
  std::vector<double> u(g.nodes());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = f(g.node(j));
  return u;
}

double kernel(double r) { return r == 0.0 ? 1.0 : std::sinh(r) / r; }

}  // namespace

TEST_CASE("grid construction") {
  const RadialGrid g = build_grid(3, 1.0, 16);
  CHECK(g.nodes() == 17);
  CHECK(g.node(4) == doctest::Approx(0.25));
  CHECK(g.node(16) == 1.0);
  CHECK(build_grid(4, 2.0, 64).spacing() == 0.03125);
  CHECK_THROWS_AS(build_grid(3, 1.0, 15), Error);
  CHECK_THROWS_AS(build_grid(2, 1.0, 64), Error);
  CHECK_THROWS_AS(build_grid(3, 0.0, 64), Error);
  try {
    build_grid(3, 1.0, 4);
  } catch (const Error& e) {
    CHECK(e.is_usage_error());
  }
}

TEST_CASE("operator on constants and quadratics") {
  const RadialGrid g(3, 1.0, 64);
  const std::vector<double> c(g.nodes(), 2.5);
  for (double v : apply_operator(g, c)) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

  // u = r^2, N = 3: -2 - (2/r)(2r) + r^2 = -6 + r^2; central differences are exact on quadratics
  const auto r2 = sample(g, [](double r) { return r * r; });
  const auto out = apply_operator(g, r2);
  CHECK(out[32] == doctest::Approx(-5.75).epsilon(1e-10));
  CHECK(out[0] == doctest::Approx(-6.0).epsilon(1e-10));
  CHECK_THROWS_AS(apply_operator(g, std::vector<double>(10, 0.0)), Error);
}

TEST_CASE("operator kernel converges at second order") {
  double prev = 0.0;
  for (int m : {64, 128, 256, 512}) {
    const RadialGrid g(3, 1.0, m);
    const auto res = apply_operator(g, sample(g, kernel));
    double worst = 0.0;
    for (double v : res) worst = std::max(worst, std::abs(v));
    if (prev > 0.0) CHECK(prev / worst == doctest::Approx(4.0).epsilon(0.15));
    prev = worst;
  }
}

TEST_CASE("operator is linear") {
  const RadialGrid g(5, 2.0, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> u(g.nodes()), v(g.nodes()), w(g.nodes());
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] = d(rng);
    v[j] = d(rng);
    w[j] = 1.5 * u[j] - 0.25 * v[j];
  }
  const auto au = apply_operator(g, u), av = apply_operator(g, v), aw = apply_operator(g, w);
  for (std::size_t j = 0; j < aw.size(); ++j)
    CHECK(aw[j] == doctest::Approx(1.5 * au[j] - 0.25 * av[j]).epsilon(1e-10).scale(1e4));
}

TEST_CASE("boundary flux") {
  const RadialGrid g(3, 1.0, 128);
  CHECK(boundary_flux(g, std::vector<double>(g.nodes(), 1.0)) == doctest::Approx(0.0).scale(1e-12));
  CHECK(boundary_flux(g, sample(g, [](double r) { return r; })) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary_flux(g, sample(g, [](double r) { return r * r; })) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(boundary_flux(g, sample(g, kernel)) == doctest::Approx(std::cosh(1.0) - std::sinh(1.0)).epsilon(1e-4));
  CHECK_THROWS_AS(boundary_flux(g, std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("pair norm and csv") {
  const RadialGrid g(3, 1.0, 16);
  auto s = SystemState::zeros(g);
  CHECK(pair_norm(s) == 0.0);
  std::fill(s.u1.begin(), s.u1.end(), 2.0);
  std::fill(s.u2.begin(), s.u2.end(), -3.0);
  CHECK(pair_norm(s) == 5.0);
  CHECK(min_node(s) == -3.0);

  std::ostringstream os;
  write_state_csv(os, g, s);
  const std::string text = os.str();
  CHECK(text.rfind("r,u1,u2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 18);
}

TEST_CASE("banded LU matches dense solve") {
  const std::size_t n = 40;
  BandMatrix a(n, 4, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 4 ? i - 4 : 0); j <= std::min(n - 1, i + 2); ++j) a(i, j) = d(rng);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  const auto b = a.multiply(x);
  const auto sol = BandLU(a).solve(b);
  for (std::size_t i = 0; i < n; ++i) CHECK(sol[i] == doctest::Approx(x[i]).epsilon(1e-9));

  // zero leading diagonal needs pivoting
  BandMatrix p(3, 1, 1);
  p(0, 1) = 1.0;
  p(1, 0) = 1.0;
  p(1, 2) = 2.0;
  p(2, 1) = 1.0;
  p(2, 2) = 1.0;
  const std::vector<double> xp{1.0, 2.0, 3.0};
  const auto yp = BandLU(p).solve(p.multiply(xp));
  for (std::size_t i = 0; i < 3; ++i) CHECK(yp[i] == doctest::Approx(xp[i]));

  CHECK_THROWS_AS(BandLU(BandMatrix(4, 1, 1)), Error);
}
