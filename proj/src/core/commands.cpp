#include "core/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/acceptance.hpp"
#include "core/analysis.hpp"
#include "core/continuation.hpp"
#include "core/errors.hpp"
#include "core/monotone.hpp"
#include "core/solver.hpp"
#include "core/steklov.hpp"

namespace radbif {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_csv(const fs::path& path, const RadialGrid& grid, const SystemState& state) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Config, "cannot write " + path.string());
  write_state_csv(out, grid, state);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Config, "cannot write " + path.string());
  out << text;
}

json mat_json(const Mat2& m) { return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})}); }

json state_record(const std::string& hash, double lambda, const SystemState& s) {
  return {{"config_hash", hash},
          {"lambda", lambda},
          {"norm_u1", sup_norm(s.u1)},
          {"norm_u2", sup_norm(s.u2)},
          {"norm_pair", pair_norm(s)}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string Session::prepare_out_dir() const {
  const fs::path dir = cfg_.out_dir();
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::Config, "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir.string();
}

void Session::require_valid_model() const {
  const auto report = validate_hypotheses(cfg_.model(), cfg_.grid().dimension());
  if (report.all_passed()) return;
  std::string msg = "model '" + cfg_.model().name() + "' violates the growth hypotheses:";
  for (const auto& c : report.checks)
    if (!c.passed) msg += " " + c.name;
  throw Error(ErrorCode::Config, msg);
}

std::string Session::steklov() {
  const auto grid = cfg_.grid();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  std::ostringstream csv;
  csv.precision(17);
  csv << "r,phi1\n";
  for (std::size_t j = 0; j < grid.nodes(); ++j) csv << grid.node(j) << ',' << pair.phi1[j] << '\n';
  write_text(dir / "phi1.csv", csv.str());
  json rec{{"config_hash", cfg_.hash()}, {"mu1", pair.mu1}, {"iterations", pair.iterations}};
  write_text(dir / "steklov.jsonl", rec.dump() + "\n");
  return "mu1=" + fmt("%.7f", pair.mu1) + "\n";
}

std::string Session::report() {
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  const auto hyp = validate_hypotheses(model, grid.dimension());

  std::optional<Branch> branch;
  if (hyp.all_passed() && direction_of_bifurcation(model) != Direction::Indeterminate) {
    ContinuationConfig cc = cfg_.continuation();
    cc.eps_step_off = 1e-4;
    cc.ds0 = 1e-3;
    cc.ds_max = 4e-3;
    cc.max_points = 40;
    branch = continue_branch(grid, model, pair, cc);
  }
  const auto rep = build_report(model, pair, branch ? &*branch : nullptr);

  json j;
  j["config_hash"] = cfg_.hash();
  j["model"] = model.name();
  j["mu1"] = rep.mu1;
  j["sigma"] = rep.sigma;
  j["zeta"] = rep.zeta;
  j["mu0"] = rep.mu0;
  j["theta1"] = rep.theta ? json(rep.theta->theta1) : json(nullptr);
  j["theta2"] = rep.theta ? json(rep.theta->theta2) : json(nullptr);
  j["K_bound"] = rep.K_bound;
  j["direction"] = to_string(rep.direction);
  j["slope_predicted"] = rep.slope_predicted.exact() ? json(rep.slope_predicted.upper)
                                                    : json::array({rep.slope_predicted.lower, rep.slope_predicted.upper});
  j["slope_fitted"] = rep.slope_fitted ? json(*rep.slope_fitted) : json(nullptr);
  j["r0_under"] = rep.r0.under;
  j["r0_over"] = rep.r0.over;
  j["jordan"] = {{"A", mat_json(rep.jordan.A)},
                 {"P", mat_json(rep.jordan.P)},
                 {"P_inv", mat_json(rep.jordan.P_inv)},
                 {"J", mat_json(rep.jordan.J)},
                 {"identity_error", rep.jordan.identity_error}};
  json checks = json::array();
  for (const auto& c : hyp.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["hypotheses"] = checks;
  const std::string text = j.dump(2) + "\n";
  write_text(dir / "report.json", text);
  return text;
}

std::string Session::solve(double lambda, double amplitude) {
  require(lambda >= 0.0, ErrorCode::Domain, "solve: lambda must be nonnegative");
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  SystemState init = initial_tangent(model, pair);
  for (double& v : init.u1) v *= amplitude;
  for (double& v : init.u2) v *= amplitude;
  const auto rep = newton_solve(grid, model, lambda, init, cfg_.newton());
  write_csv(dir / "solve.csv", grid, rep.state);
  json rec = state_record(cfg_.hash(), lambda, rep.state);
  rec["iterations"] = rep.iterations;
  rec["residual"] = rep.residual_norm;
  rec["final_damping"] = rep.final_damping;
  rec["classification"] = to_string(rep.classification);
  write_text(dir / "solve.jsonl", rec.dump() + "\n");
  return rec.dump() + "\n";
}

std::string Session::limit() {
  require_valid_model();
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  const auto rep = solve_limit_problem_sweep(grid, model, pair, cfg_.newton());
  write_csv(dir / "limit.csv", grid, rep.state);
  json rec = state_record(cfg_.hash(), 0.0, rep.state);
  rec.erase("lambda");
  rec["iterations"] = rep.iterations;
  rec["residual"] = rep.residual_norm;
  write_text(dir / "limit.jsonl", rec.dump() + "\n");
  return rec.dump() + "\n";
}

std::string Session::branch(int dump_every) {
  require_valid_model();
  require(dump_every >= 0, ErrorCode::Config, "branch: --dump-every must be nonnegative");
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  const auto b = continue_branch(grid, model, pair, cfg_.continuation());

  std::ostringstream jsonl, dat;
  dat.precision(17);
  dat << "# lambda norm_pair\n";
  if (dump_every > 0) fs::create_directories(dir / "states");
  for (std::size_t k = 0; k < b.points.size(); ++k) {
    const auto& p = b.points[k];
    json rec = state_record(cfg_.hash(), p.lambda, p.state);
    rec["ds"] = p.ds;
    rec["tangent_sign"] = p.tangent_lambda_sign;
    jsonl << rec.dump() << '\n';
    dat << p.lambda << ' ' << p.norm << '\n';
    if (dump_every > 0 && k % static_cast<std::size_t>(dump_every) == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%05zu.csv", k);
      write_csv(dir / "states" / name, grid, p.state);
    }
  }
  write_text(dir / "branch.jsonl", jsonl.str());
  write_text(dir / "branch.dat", dat.str());

  std::ostringstream out;
  out << "points=" << b.points.size() << " termination=" << to_string(b.reason) << " mu0=" << fmt("%.7f", b.mu0);
  if (b.fold) out << " fold_lambda=" << fmt("%.7f", b.fold->lambda) << " fold_index=" << b.fold->index;
  else out << " fold=none";
  if (b.folds.size() > 1) out << " folds=" << b.folds.size();
  out << '\n';
  return out.str();
}

std::string Session::multiplicity(double lambda) {
  require_valid_model();
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  const auto b = continue_branch(grid, model, pair, cfg_.continuation());
  const auto two = second_solution(grid, model, pair, lambda, b, cfg_.newton());
  write_csv(dir / "multiplicity_minimal.csv", grid, two.minimal);
  write_csv(dir / "multiplicity_other.csv", grid, two.other);
  bool ordered = true;
  for (std::size_t j = 0; j < grid.nodes(); ++j)
    ordered = ordered && two.minimal.u1[j] <= two.other.u1[j] && two.minimal.u2[j] <= two.other.u2[j];
  json rec{{"config_hash", cfg_.hash()},
           {"lambda", lambda},
           {"mu0", b.mu0},
           {"fold_lambda", b.fold ? json(b.fold->lambda) : json(nullptr)},
           {"minimal_norm", pair_norm(two.minimal)},
           {"other_norm", pair_norm(two.other)},
           {"relative_gap", two.norm_gap},
           {"minimal_residual", two.minimal_residual},
           {"other_residual", two.other_residual},
           {"monotone_iterations", two.monotone_iterations},
           {"ordered", ordered}};
  write_text(dir / "multiplicity.json", rec.dump(2) + "\n");
  return rec.dump(2) + "\n";
}

std::string Session::rescale_check() {
  require_valid_model();
  const auto grid = cfg_.grid();
  const auto model = cfg_.model();
  const fs::path dir = prepare_out_dir();
  const auto pair = steklov_eigenpair(grid);
  const auto b = continue_branch(grid, model, pair, cfg_.continuation());
  const auto limit = solve_limit_problem_sweep(grid, model, pair, cfg_.newton());
  const auto table = radbif::rescale_check(b, theta_exponents(model), limit.state);
  std::ostringstream csv;
  csv.precision(17);
  csv << "# config_hash " << cfg_.hash() << "\nlambda,ratio1,ratio2\n";
  for (const auto& row : table.rows) csv << row.lambda << ',' << row.ratio1 << ',' << row.ratio2 << '\n';
  write_text(dir / "rescale.csv", csv.str());
  const auto& end = table.rows.back();
  std::string text = "rows=" + std::to_string(table.rows.size()) + " lambda_end=" + fmt("%.3g", end.lambda) +
                     " ratio1=" + fmt("%.6f", end.ratio1) + " ratio2=" + fmt("%.6f", end.ratio2) +
                     " monotone=" + (table.monotone ? "yes" : "no") + " within_tolerance=" +
                     (table.endpoint_within_tolerance ? "yes" : "no") + "\n";
  if (!table.passed()) throw Error(ErrorCode::CheckFailed, "rescale check failed: " + text);
  return text;
}

std::string Session::verify(bool& all_passed) {
  AcceptanceOptions opts;
  opts.intervals = cfg_.grid().intervals();
  const auto results = run_acceptance(opts);
  std::string text;
  all_passed = true;
  for (const auto& r : results) {
    text += format_result_line(r) + "\n";
    all_passed = all_passed && r.passed;
  }
  text += all_passed ? "verify: all criteria PASS\n" : "verify: FAILED\n";
  return text;
}

}  // namespace radbif
