#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace radbif {

namespace {

double horner(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

std::vector<double> trim(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

// Lowest power >= 2 with a nonzero coefficient, or +inf if f is linear.
double lowest_nonlinear_power(const std::vector<double>& c) {
  for (std::size_t k = 2; k < c.size(); ++k)
    if (c[k] != 0.0) return static_cast<double>(k);
  return std::numeric_limits<double>::infinity();
}

// inf_{s >= 0} f(s)/s for a polynomial with f(0) = 0.
double linear_minorant(const std::vector<double>& c) {
  auto q = [&c](double s) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * s + c[k];
    return acc;
  };
  std::vector<double> s_grid{0.0};
  for (double e = -8.0; e <= 6.0; e += 0.01) s_grid.push_back(std::pow(10.0, e));
  std::size_t best = 0;
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (q(s_grid[i]) < q(s_grid[best])) best = i;
  double a = s_grid[best == 0 ? 0 : best - 1];
  double b = s_grid[std::min(best + 1, s_grid.size() - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + b); ++it) {
    const double x1 = b - g * (b - a), x2 = a + g * (b - a);
    if (q(x1) < q(x2)) b = x2; else a = x1;
  }
  return std::min(q(s_grid[best]), q(0.5 * (a + b)));
}

double component_limit(const std::vector<double>& c, double nu) {
  const double k0 = lowest_nonlinear_power(c);
  if (k0 > nu) return 0.0;
  if (k0 == nu) return c[static_cast<std::size_t>(k0)];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Config: return "config";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::EstimationFailed: return "estimation-failed";
    case ErrorCode::CollapsedToZero: return "collapsed-to-zero";
    case ErrorCode::StepOff: return "step-off";
    case ErrorCode::Continuation: return "continuation";
    case ErrorCode::Subsolution: return "subsolution";
    case ErrorCode::Monotonicity: return "monotonicity";
    case ErrorCode::Distinctness: return "distinctness";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::CheckFailed: return "check-failed";
  }
  return "unknown";
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  coeffs = trim(std::move(coeffs));
  Nonlinearity n;
  n.coeffs_ = coeffs;
  const auto d = derivative_coeffs(coeffs);
  n.value_ = [coeffs](double s) { return horner(coeffs, s); };
  n.derivative_ = [d](double s) { return horner(d, s); };
  return n;
}

Nonlinearity Nonlinearity::callable(Fn value, Fn derivative) {
  Nonlinearity n;
  n.value_ = std::move(value);
  n.derivative_ = std::move(derivative);
  return n;
}

double Nonlinearity::value(double s) const { return value_(s); }
double Nonlinearity::derivative(double s) const { return derivative_(s); }

double Nonlinearity::remainder(double s) const {
  if (coeffs_) {
    const auto& c = *coeffs_;
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 2;) acc = acc * s + c[k];
    return acc * s * s + (c.empty() ? 0.0 : c[0]);
  }
  return value_(s) - derivative_(0.0) * s;
}

NonlinearityModel::NonlinearityModel(std::string name, Nonlinearity f1, Nonlinearity f2,
                                     GrowthParameters params,
                                     std::optional<RemainderLimits> r_lims)
    : name_(std::move(name)),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      params_(params),
      r_lims_(r_lims) {}

NonlinearityModel NonlinearityModel::reference() {
  GrowthParameters exact;
  exact.K = 0.75;
  return from_coefficients({1.0, -1.0, 1.0}, {1.0, 0.5}, exact, "reference");
}

NonlinearityModel NonlinearityModel::left() {
  GrowthParameters exact;
  exact.K = 1.0;
  return from_coefficients({1.0, 1.0}, {1.0, 1.0}, exact, "left");
}

NonlinearityModel NonlinearityModel::linear() {
  GrowthParameters exact;
  exact.K = 1.0;
  return from_coefficients({1.0}, {1.0}, exact, "linear");
}

NonlinearityModel NonlinearityModel::from_coefficients(const std::vector<double>& coeffs1,
                                                       const std::vector<double>& coeffs2,
                                                       const GrowthParameters& overrides,
                                                       std::string name) {
  require(!coeffs1.empty() && !coeffs2.empty(), ErrorCode::Config,
          "polynomial model needs at least the linear coefficient");
  auto full = [](const std::vector<double>& a) {
    std::vector<double> c{0.0};
    c.insert(c.end(), a.begin(), a.end());
    return trim(c);
  };
  const auto c1 = full(coeffs1), c2 = full(coeffs2);
  require(c1.size() >= 2 && c2.size() >= 2, ErrorCode::Config, "polynomial model is identically zero");

  GrowthParameters p;
  p.p2 = static_cast<double>(c1.size() - 1);
  p.b2 = c1.back();
  p.p1 = static_cast<double>(c2.size() - 1);
  p.b1 = c2.back();
  const double k1 = lowest_nonlinear_power(c1), k2 = lowest_nonlinear_power(c2);
  p.nu1 = std::isfinite(k1) ? k1 : 2.0;
  p.nu2 = std::isfinite(k2) ? k2 : 2.0;
  p.K = std::min(linear_minorant(c1), linear_minorant(c2));

  auto apply = [](double& dst, double src) { if (src > 0.0) dst = src; };
  apply(p.p1, overrides.p1);
  apply(p.p2, overrides.p2);
  apply(p.b1, overrides.b1);
  apply(p.b2, overrides.b2);
  apply(p.nu1, overrides.nu1);
  apply(p.nu2, overrides.nu2);
  apply(p.K, overrides.K);

  std::optional<RemainderLimits> lims;
  const double nu = std::min(p.nu1, p.nu2);
  const double l1 = component_limit(c1, nu), l2 = component_limit(c2, nu);
  if (std::isfinite(l1) && std::isfinite(l2)) {
    lims = RemainderLimits{l1, l1, l2, l2, 0.0, true};
  }
  return NonlinearityModel(std::move(name), Nonlinearity::polynomial(c1), Nonlinearity::polynomial(c2),
                           p, lims);
}

double NonlinearityModel::nu() const noexcept { return std::min(params_.nu1, params_.nu2); }

double NonlinearityModel::zeta() const {
  const double a = slope_at_zero(Component::First), b = slope_at_zero(Component::Second);
  require(a > 0.0 && b > 0.0, ErrorCode::Domain, "zeta needs f1'(0) > 0 and f2'(0) > 0");
  return std::sqrt(b / a);
}

double eval_f(const NonlinearityModel& model, Component c, double s) {
  require(s >= 0.0, ErrorCode::Domain, "eval_f: negative argument");
  return model.f(c).value(s);
}

double eval_df(const NonlinearityModel& model, Component c, double s) {
  require(s >= 0.0, ErrorCode::Domain, "eval_df: negative argument");
  return model.f(c).derivative(s);
}

double remainder(const NonlinearityModel& model, Component c, double s) {
  require(s > 0.0, ErrorCode::Domain, "remainder: argument must be positive");
  return model.f(c).remainder(s);
}

RemainderLimits estimate_remainder_limits(const NonlinearityModel& model,
                                          const LimitEstimateOptions& opts) {
  require(opts.s_min > 0.0 && opts.s_max > opts.s_min && opts.samples_per_decade > 0,
          ErrorCode::Domain, "remainder limit estimate: bad sampling window");
  const double nu = model.nu();
  const double decades = std::log10(opts.s_max / opts.s_min);
  const int count = static_cast<int>(std::lround(decades * opts.samples_per_decade));

  RemainderLimits out;
  out.analytic = false;
  double uncertainty = 0.0;
  for (Component c : {Component::First, Component::Second}) {
    std::vector<RemainderSample> table;
    for (int k = 0; k <= count; ++k) {
      const double s = opts.s_max * std::pow(10.0, -static_cast<double>(k) / opts.samples_per_decade);
      table.push_back({s, model.f(c).remainder(s) / std::pow(s, nu)});
    }
    // Last decade = the smallest samples.
    const std::size_t first_last = table.size() - static_cast<std::size_t>(opts.samples_per_decade) - 1;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum_last = 0.0, sum_prev = 0.0;
    bool increasing = true, decreasing = true;
    for (std::size_t k = first_last; k < table.size(); ++k) {
      lo = std::min(lo, table[k].ratio);
      hi = std::max(hi, table[k].ratio);
      sum_last += table[k].ratio;
      if (k > first_last) {
        increasing = increasing && table[k].ratio >= table[k - 1].ratio;
        decreasing = decreasing && table[k].ratio <= table[k - 1].ratio;
      }
    }
    const std::size_t n_last = table.size() - first_last;
    std::size_t n_prev = 0;
    for (std::size_t k = first_last >= n_last ? first_last - n_last + 1 : 0; k < first_last; ++k, ++n_prev)
      sum_prev += table[k].ratio;
    const double mean_last = sum_last / static_cast<double>(n_last);
    const double spread = hi - lo;
    const bool finite = std::isfinite(lo) && std::isfinite(hi);
    if (!finite || (spread > opts.spread_tolerance * std::max(1.0, std::abs(mean_last)) &&
                    !(increasing || decreasing))) {
      std::ostringstream msg;
      msg << "remainder limits of f" << static_cast<int>(c)
          << " did not settle; samples (s, R/s^nu):";
      for (const auto& row : table) msg << " (" << row.s << ", " << row.ratio << ")";
      throw Error(ErrorCode::EstimationFailed, msg.str());
    }
    const double trend = n_prev > 0 ? std::abs(mean_last - sum_prev / static_cast<double>(n_prev)) : 0.0;
    uncertainty = std::max({uncertainty, spread, trend});
    if (c == Component::First) {
      out.r1_under = lo;
      out.r1_over = hi;
    } else {
      out.r2_under = lo;
      out.r2_over = hi;
    }
  }
  out.uncertainty = uncertainty;
  return out;
}

RemainderLimits remainder_limits(const NonlinearityModel& model, const LimitEstimateOptions& opts) {
  if (model.analytic_limits()) return *model.analytic_limits();
  return estimate_remainder_limits(model, opts);
}

R0Bounds r0_bounds(const NonlinearityModel& model, const RemainderLimits& limits) {
  const double zeta = model.zeta();
  const double nu = model.nu();
  const double w1 = 0.5 * std::pow(zeta / (1.0 + zeta), nu - 1.0);
  const double w2 = 0.5 * std::pow(1.0 / (1.0 + zeta), nu - 1.0);
  return {w1 * limits.r1_under + w2 * limits.r2_under, w1 * limits.r1_over + w2 * limits.r2_over};
}

R0Bounds r0_bounds(const NonlinearityModel& model) { return r0_bounds(model, remainder_limits(model)); }

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<double> hypothesis_sample_grid() {
  std::vector<double> s;
  for (int k = 0; k <= 11 * 10; ++k) s.push_back(std::pow(10.0, -8.0 + k / 10.0));
  return s;
}

HypothesisReport validate_hypotheses(const NonlinearityModel& model, int n_dim) {
  HypothesisReport report;
  const auto grid = hypothesis_sample_grid();
  const auto& p = model.params();
  auto add = [&report](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  for (Component c : {Component::First, Component::Second}) {
    const std::string tag = c == Component::First ? "f1" : "f2";
    const auto& f = model.f(c);

    bool nonneg = true, minorant = p.K > 0.0, monotone = true;
    for (double s : grid) {
      const double v = f.value(s);
      nonneg = nonneg && v >= 0.0;
      minorant = minorant && v >= p.K * s - 1e-12 * std::max(1.0, v);
      monotone = monotone && f.derivative(s) >= 0.0;
    }
    add(tag + ".nonnegative", nonneg);
    add(tag + ".zero_at_origin", f.value(0.0) == 0.0);
    add(tag + ".positive_slope_at_zero", f.slope_at_zero() > 0.0,
        "f'(0) = " + std::to_string(f.slope_at_zero()));
    add(tag + ".linear_minorant", minorant, "K = " + std::to_string(p.K));
    add(tag + ".monotone", monotone);

    // f1 grows like b2 s^p2, f2 like b1 s^p1.
    const double pw = c == Component::First ? p.p2 : p.p1;
    const double b = c == Component::First ? p.b2 : p.b1;
    double err_first = 0.0, err_last = 0.0;
    bool growth = b > 0.0;
    if (growth) {
      for (int k = 0; k <= 40; ++k) {
        const double s = std::pow(10.0, 2.0 + k / 10.0);
        const double err = std::abs(f.value(s) / std::pow(s, pw) / b - 1.0);
        if (k == 0) err_first = err;
        err_last = err;
      }
      growth = std::isfinite(err_last) && err_last <= 1e-2 && err_last <= err_first + 1e-12;
    }
    add(tag + ".growth_at_infinity", growth, "relative error at s=1e6: " + std::to_string(err_last));
  }

  const double critical = n_dim > 2 ? static_cast<double>(n_dim) / (n_dim - 2) : 0.0;
  auto in_range = [critical](double pw) { return pw > 1.0 && pw <= critical + 1e-12; };
  auto is_critical = [critical](double pw) { return std::abs(pw - critical) <= 1e-12; };
  add("dimension", n_dim > 2, "N = " + std::to_string(n_dim));
  add("p1.subcritical", in_range(p.p1), "p1 = " + std::to_string(p.p1));
  add("p2.subcritical", in_range(p.p2), "p2 = " + std::to_string(p.p2));
  std::string crit_detail = is_critical(p.p1) ? (is_critical(p.p2) ? "p1 and p2 critical" : "only p1 critical")
                                              : (is_critical(p.p2) ? "only p2 critical" : "none critical");
  add("not_both_critical", !(is_critical(p.p1) && is_critical(p.p2)), crit_detail);
  add("nu.above_one", p.nu1 > 1.0 && p.nu2 > 1.0);
  return report;
}

}  // namespace radbif
