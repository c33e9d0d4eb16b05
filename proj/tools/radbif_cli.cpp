#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radbif/radbif.h"

namespace {

int exit_code(rb_status st) {
  switch (st) {
    case RB_OK: return 0;
    case RB_ERR_CONFIG: return 2;
    default: return 1;
  }
}

int report(rb_status st, const rb_session* session) {
  if (st == RB_OK || st == RB_ERR_NUMERICAL) {
    const char* out = rb_session_output(session);
    if (out && *out) std::fputs(out, stdout);
  }
  if (st != RB_OK) std::fprintf(stderr, "error: %s\n", rb_last_error());
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial bifurcation toolkit for coupled flux-boundary systems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--override", overrides, "key=value override (repeatable)")->allow_extra_args(false);

  double lambda = 0.0;
  double amplitude = 1.0;
  int dump_every = 0;

  auto* steklov = app.add_subcommand("steklov", "first radial Steklov eigenpair");
  auto* rep = app.add_subcommand("report", "growth data, exponents and direction of bifurcation");
  auto* solve = app.add_subcommand("solve", "Newton solve at fixed lambda");
  solve->add_option("--lambda", lambda, "bifurcation parameter")->required();
  solve->add_option("--amplitude", amplitude, "initial guess amplitude along phi1");
  auto* limit = app.add_subcommand("limit", "limit problem with pure-power boundary laws");
  auto* branch = app.add_subcommand("branch", "continue the positive branch from (mu1, 0)");
  branch->add_option("--dump-every", dump_every, "write every k-th state profile (0 disables)");
  auto* mult = app.add_subcommand("multiplicity", "minimal and second solution at lambda");
  mult->add_option("--lambda", lambda, "bifurcation parameter")->required();
  auto* rescale = app.add_subcommand("rescale-check", "compare rescaled branch states with the limit solution");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  rb_session* session = nullptr;
  rb_status st = rb_session_create(config_path.empty() ? nullptr : config_path.c_str(), &session);
  if (st != RB_OK) return report(st, session);
  for (const auto& o : overrides) {
    st = rb_session_override(session, o.c_str());
    if (st != RB_OK) {
      const int rc = report(st, session);
      rb_session_destroy(session);
      return rc;
    }
  }

  if (*steklov) st = rb_cmd_steklov(session, nullptr);
  else if (*rep) st = rb_cmd_report(session);
  else if (*solve) st = rb_cmd_solve(session, lambda, amplitude);
  else if (*limit) st = rb_cmd_limit(session);
  else if (*branch) st = rb_cmd_branch(session, dump_every);
  else if (*mult) st = rb_cmd_multiplicity(session, lambda);
  else if (*rescale) st = rb_cmd_rescale_check(session);
  else if (*verify) st = rb_cmd_verify(session);

  const int rc = report(st, session);
  rb_session_destroy(session);
  return rc;
}
