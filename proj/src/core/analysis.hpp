#pragma once

#include <array>
#include <optional>
#include <vector>

#include "core/continuation.hpp"
#include "core/model.hpp"
#include "core/steklov.hpp"

namespace radbif {

using Mat2 = std::array<std::array<double, 2>, 2>;

enum class Direction { Left, Right, Indeterminate };
const char* to_string(Direction d) noexcept;

/// mu1 / sqrt(f1'(0) f2'(0)). Domain error for a nonpositive slope.
double bifurcation_point(const NonlinearityModel& model, double mu1);

/// Linearization of the boundary coupling at zero and its diagonalization.
struct JordanData {
  double sigma = 0.0;
  double zeta = 0.0;
  Mat2 A{}, P{}, P_inv{}, J{};
  double identity_error = 0.0;  // max |P J P^{-1} - A|
};

JordanData jordan_data(const NonlinearityModel& model);

struct ThetaExponents {
  double theta1 = 0.0, theta2 = 0.0;
};

/// Solves 1 + theta2 - theta1 p1 = 0, 1 + theta1 - theta2 p2 = 0.
ThetaExponents theta_exponents(const NonlinearityModel& model);
ThetaExponents theta_exponents(double p1, double p2);

Direction direction_of_bifurcation(const NonlinearityModel& model);
Direction direction_of_bifurcation(const R0Bounds& bounds);

/// Limits of (mu0 - lambda)/||u||^(nu-1) at the bifurcation point. `lower`
/// and `upper` coincide when the remainder limits are exact.
struct SlopePrediction {
  double lower = 0.0, upper = 0.0;
  [[nodiscard]] bool exact() const noexcept { return lower == upper; }
};

SlopePrediction slope_prediction(const NonlinearityModel& model, const SteklovPair& steklov);

struct SlopeFit {
  double intercept = 0.0;  // extrapolated quotient at zero norm
  double slope = 0.0;
  std::size_t points = 0;
};

/// Least-squares line of the quotient against pair_norm over branch points
/// with norm < max_norm, extrapolated to zero. InsufficientData error with
/// fewer than 5 such points.
SlopeFit slope_fit(const Branch& branch, double mu0, double nu, double max_norm = 0.1);

struct RescaleRow {
  double lambda = 0.0;
  double ratio1 = 0.0;  // lambda^theta1 sup|u1| / sup|w1*|
  double ratio2 = 0.0;
};

struct RescaleTable {
  std::vector<RescaleRow> rows;   // ordered by decreasing lambda
  bool endpoint_within_tolerance = false;
  bool monotone = false;
  [[nodiscard]] bool passed() const noexcept { return endpoint_within_tolerance && monotone; }
};

/// Compares the rescaled branch tail (lambda <= lambda_max) with the limit
/// solution. InsufficientData error when the tail has fewer than 2 points.
RescaleTable rescale_check(const Branch& branch, const ThetaExponents& theta, const SystemState& limit_solution,
                           double lambda_max = 1e-2, double tolerance = 0.02);

/// mu1 / K. Domain error for K <= 0.
double nonexistence_bound(const NonlinearityModel& model, double mu1);

struct BifurcationReport {
  double mu1 = 0.0;
  double sigma = 0.0;
  double zeta = 0.0;
  double mu0 = 0.0;
  std::optional<ThetaExponents> theta;
  double K_bound = 0.0;
  Direction direction = Direction::Indeterminate;
  SlopePrediction slope_predicted;
  std::optional<double> slope_fitted;
  R0Bounds r0;
  JordanData jordan;
};

/// Scalar analytics; the fitted slope is included when `branch` is given.
BifurcationReport build_report(const NonlinearityModel& model, const SteklovPair& steklov,
                               const Branch* branch = nullptr);

}  // namespace radbif
