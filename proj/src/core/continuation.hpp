#pragma once

#include <optional>
#include <vector>

#include "core/grid.hpp"
#include "core/model.hpp"
#include "core/solver.hpp"
#include "core/steklov.hpp"

namespace radbif {

struct ContinuationConfig {
  double ds0 = 0.01;
  double ds_min = 1e-8;
  double ds_max = 2.0;
  double lambda_stop_low = 1e-3;
  double eps_step_off = 1e-3;
  int max_points = 2000;
  int corrector_max_iter = 12;
  NewtonConfig newton;
};

struct BranchPoint {
  double lambda = 0.0;
  SystemState state;
  double norm = 0.0;              // pair_norm(state)
  int tangent_lambda_sign = 0;    // sign of lambda - previous lambda
  double ds = 0.0;                // arclength step that produced the point
  double arclength = 0.0;         // cumulative weighted distance from the first point
  int corrector_iterations = 0;
};

struct Fold {
  double lambda = 0.0;  // quadratic-fit extremum
  std::size_t index = 0;
  bool is_maximum = true;
};

enum class Termination { LambdaStopLow, MaxPoints, CorrectorFailure, NonPositive };
const char* to_string(Termination t) noexcept;

struct Branch {
  double mu0 = 0.0;
  std::vector<BranchPoint> points;
  std::vector<Fold> folds;        // every sign flip of d lambda / ds
  std::optional<Fold> fold;       // the largest-lambda turning point
  Termination reason = Termination::MaxPoints;
};

/// (phi1/(1+zeta), zeta phi1/(1+zeta)); unit pair norm for sup-normalized phi1.
SystemState initial_tangent(const NonlinearityModel& model, const SteklovPair& steklov);

/// First nontrivial point near (mu0, 0): corrects eps * tangent under the
/// constraint that its projection on the tangent stays at eps.
/// Domain error unless eps in (0, 0.1]; StepOff error on collapse to zero.
BranchPoint step_off(const RadialGrid& grid, const NonlinearityModel& model, double mu0,
                     const SystemState& tangent, double eps, const ContinuationConfig& cfg);

/// Pseudo-arclength continuation of the positive branch from mu0 down to
/// lambda_stop_low. Continuation error when the very first corrector fails.
Branch continue_branch(const RadialGrid& grid, const NonlinearityModel& model, const SteklovPair& steklov,
                       const ContinuationConfig& cfg);

/// Every turning point of lambda along the branch.
std::vector<Fold> detect_folds(const Branch& branch);
/// The turning point with the largest lambda, if any.
std::optional<Fold> detect_fold(const Branch& branch);

/// All distinct positive solutions at `lambda` obtained by re-converging
/// every branch segment that crosses it. Distinctness uses relative
/// pair_norm difference > kDistinctGap.
inline constexpr double kDistinctGap = 1e-3;
std::vector<SystemState> solutions_at(const Branch& branch, double lambda, const RadialGrid& grid,
                                      const NonlinearityModel& model, const NewtonConfig& cfg = {});

/// (dU.dU)/dim + dlambda^2 distance used for arclength.
double weighted_distance(const SystemState& a, double lambda_a, const SystemState& b, double lambda_b);

}  // namespace radbif
