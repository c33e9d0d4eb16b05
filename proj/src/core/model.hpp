#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace radbif {

/// Selects f1 (the flux law of u1, driven by u2) or f2 (flux of u2, driven by u1).
enum class Component { First = 1, Second = 2 };

/// A C^1 scalar map [0, inf) -> [0, inf): either an exact polynomial
/// sum_k a_k s^k or a caller-supplied pair (f, f').
class Nonlinearity {
 public:
  using Fn = std::function<double(double)>;

  /// coeffs[k] multiplies s^k; coeffs[0] is the constant term.
  static Nonlinearity polynomial(std::vector<double> coeffs);
  static Nonlinearity callable(Fn value, Fn derivative);

  [[nodiscard]] double value(double s) const;
  [[nodiscard]] double derivative(double s) const;
  [[nodiscard]] double slope_at_zero() const { return derivative(0.0); }

  /// f(s) - f'(0) s. Exact tail sum for polynomials.
  [[nodiscard]] double remainder(double s) const;

  [[nodiscard]] const std::optional<std::vector<double>>& coefficients() const noexcept {
    return coeffs_;
  }

 private:
  std::optional<std::vector<double>> coeffs_;
  Fn value_, derivative_;
};

/// Growth and small-amplitude data of the pair.
///
/// Pairing follows the coupled boundary law: f2(s) ~ b1 s^p1 and
/// f1(s) ~ b2 s^p2 as s -> inf.
struct GrowthParameters {
  double p1 = 0.0, p2 = 0.0;
  double b1 = 0.0, b2 = 0.0;
  double nu1 = 0.0, nu2 = 0.0;
  double K = 0.0;
};

/// liminf / limsup of R_i(s)/s^nu as s -> 0+.
struct RemainderLimits {
  double r1_under = 0.0, r1_over = 0.0;
  double r2_under = 0.0, r2_over = 0.0;
  double uncertainty = 0.0;
  bool analytic = false;
};

struct R0Bounds {
  double under = 0.0;
  double over = 0.0;
};

class NonlinearityModel {
 public:
  NonlinearityModel(std::string name, Nonlinearity f1, Nonlinearity f2, GrowthParameters params,
                    std::optional<RemainderLimits> r_lims = std::nullopt);

  /// f1 = s - s^2 + s^3, f2 = s + s^2/2, K = 3/4.
  static NonlinearityModel reference();
  /// f1 = f2 = s + s^2, bifurcates to the left.
  static NonlinearityModel left();
  /// f1 = f2 = s. Violates the superlinear growth hypothesis; used for degenerate checks.
  static NonlinearityModel linear();

  /// Polynomial pair given as coefficient lists a_1, a_2, ... (no constant term).
  /// Growth data, remainder limits and K are derived exactly from the
  /// coefficients; entries of `overrides` that are set replace the derived ones.
  static NonlinearityModel from_coefficients(const std::vector<double>& coeffs1,
                                             const std::vector<double>& coeffs2,
                                             const GrowthParameters& overrides,
                                             std::string name = "polynomial");

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const Nonlinearity& f(Component c) const noexcept {
    return c == Component::First ? f1_ : f2_;
  }
  [[nodiscard]] const GrowthParameters& params() const noexcept { return params_; }
  [[nodiscard]] const std::optional<RemainderLimits>& analytic_limits() const noexcept {
    return r_lims_;
  }

  [[nodiscard]] double nu() const noexcept;
  [[nodiscard]] double slope_at_zero(Component c) const { return f(c).slope_at_zero(); }
  /// sqrt(f2'(0) / f1'(0))
  [[nodiscard]] double zeta() const;

 private:
  std::string name_;
  Nonlinearity f1_, f2_;
  GrowthParameters params_;
  std::optional<RemainderLimits> r_lims_;
};

/// f_i(s); Domain error for s < 0.
double eval_f(const NonlinearityModel& model, Component c, double s);
double eval_df(const NonlinearityModel& model, Component c, double s);

/// R_i(s) = f_i(s) - f_i'(0) s; Domain error for s <= 0.
double remainder(const NonlinearityModel& model, Component c, double s);

struct RemainderSample {
  double s;
  double ratio;  // R_i(s) / s^nu
};

struct LimitEstimateOptions {
  double s_min = 1e-6;
  double s_max = 1e-2;
  int samples_per_decade = 25;
  double spread_tolerance = 1e-2;
};

/// Numerical estimate of the remainder limits from geometric sampling,
/// ignoring any analytic values the model carries.
RemainderLimits estimate_remainder_limits(const NonlinearityModel& model,
                                          const LimitEstimateOptions& opts = {});

/// Analytic limits when the model has them, otherwise the numerical estimate.
RemainderLimits remainder_limits(const NonlinearityModel& model,
                                 const LimitEstimateOptions& opts = {});

/// Weighted combinations of the remainder limits that decide the direction
/// of bifurcation at the trivial branch.
R0Bounds r0_bounds(const NonlinearityModel& model, const RemainderLimits& limits);
R0Bounds r0_bounds(const NonlinearityModel& model);

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] const HypothesisCheck* find(const std::string& name) const;
};

HypothesisReport validate_hypotheses(const NonlinearityModel& model, int n_dim);

/// Geometric sample grid 1e-8 .. 1e3 shared by the sampled hypothesis checks.
std::vector<double> hypothesis_sample_grid();

}  // namespace radbif
