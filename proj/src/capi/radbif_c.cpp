#include "radbif/radbif.h"

#include <cstring>
#include <memory>
#include <string>

#include "core/analysis.hpp"
#include "core/commands.hpp"
#include "core/errors.hpp"
#include "core/steklov.hpp"

struct rb_session {
  radbif::Session session;
  std::string output;
};

namespace {

thread_local std::string g_last_error;

rb_status fail(rb_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <class F>
rb_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RB_OK;
  } catch (const radbif::Error& e) {
    return fail(e.is_usage_error() ? RB_ERR_CONFIG : RB_ERR_NUMERICAL,
                std::string(radbif::to_string(e.code())) + ": " + e.what());
  } catch (const std::exception& e) {
    return fail(RB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RB_ERR_INTERNAL, "unknown exception");
  }
}

template <class F>
rb_status with_session(rb_session* s, F&& body) {
  if (s == nullptr) return fail(RB_ERR_INVALID_HANDLE, "null session handle");
  return guarded([&] { s->output = body(s->session); });
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error(void) { return g_last_error.c_str(); }

rb_status rb_session_create(const char* config_path, rb_session** out) {
  if (out == nullptr) return fail(RB_ERR_INVALID_HANDLE, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    auto cfg = config_path ? radbif::RunConfig::from_file(config_path) : radbif::RunConfig::from_text("");
    *out = new rb_session{radbif::Session(std::move(cfg)), {}};
  });
}

rb_status rb_session_create_from_text(const char* config_text, rb_session** out) {
  if (out == nullptr) return fail(RB_ERR_INVALID_HANDLE, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new rb_session{radbif::Session(radbif::RunConfig::from_text(config_text ? config_text : "")), {}};
  });
}

void rb_session_destroy(rb_session* session) { delete session; }

rb_status rb_session_override(rb_session* session, const char* assignment) {
  if (session == nullptr) return fail(RB_ERR_INVALID_HANDLE, "null session handle");
  if (assignment == nullptr) return fail(RB_ERR_CONFIG, "null override");
  return guarded([&] { session->session.config().apply_override(assignment); });
}

rb_status rb_session_config_hash(const rb_session* session, char* buf, size_t buf_len) {
  if (session == nullptr) return fail(RB_ERR_INVALID_HANDLE, "null session handle");
  return guarded([&] {
    const std::string h = session->session.config().hash();
    radbif::require(buf != nullptr && buf_len > h.size(), radbif::ErrorCode::Config, "hash buffer too small");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

const char* rb_session_output(const rb_session* session) {
  return session == nullptr ? "" : session->output.c_str();
}

rb_status rb_cmd_steklov(rb_session* session, double* mu1_out) {
  return with_session(session, [&](radbif::Session& s) {
    auto text = s.steklov();
    if (mu1_out) *mu1_out = radbif::steklov_eigenpair(s.config().grid()).mu1;
    return text;
  });
}

rb_status rb_cmd_report(rb_session* session) {
  return with_session(session, [](radbif::Session& s) { return s.report(); });
}

rb_status rb_cmd_solve(rb_session* session, double lambda, double init_amplitude) {
  return with_session(session, [&](radbif::Session& s) { return s.solve(lambda, init_amplitude); });
}

rb_status rb_cmd_limit(rb_session* session) {
  return with_session(session, [](radbif::Session& s) { return s.limit(); });
}

rb_status rb_cmd_branch(rb_session* session, int dump_every) {
  return with_session(session, [&](radbif::Session& s) { return s.branch(dump_every); });
}

rb_status rb_cmd_multiplicity(rb_session* session, double lambda) {
  return with_session(session, [&](radbif::Session& s) { return s.multiplicity(lambda); });
}

rb_status rb_cmd_rescale_check(rb_session* session) {
  return with_session(session, [](radbif::Session& s) { return s.rescale_check(); });
}

rb_status rb_cmd_verify(rb_session* session) {
  bool passed = false;
  const rb_status st = with_session(session, [&](radbif::Session& s) { return s.verify(passed); });
  if (st != RB_OK) return st;
  return passed ? RB_OK : fail(RB_ERR_NUMERICAL, "acceptance suite reported failures");
}

rb_status rb_steklov_mu1(int n_dim, double radius, int intervals, double* mu1_out) {
  return guarded([&] {
    const double mu = radbif::steklov_eigenpair(radbif::RadialGrid(n_dim, radius, intervals)).mu1;
    if (mu1_out) *mu1_out = mu;
  });
}

rb_status rb_steklov_shooting(int n_dim, double radius, double tol, double* mu1_out) {
  return guarded([&] {
    const double mu = radbif::steklov_shooting_oracle(n_dim, radius, tol);
    if (mu1_out) *mu1_out = mu;
  });
}

rb_status rb_theta_exponents(double p1, double p2, double* theta1_out, double* theta2_out) {
  return guarded([&] {
    const auto t = radbif::theta_exponents(p1, p2);
    if (theta1_out) *theta1_out = t.theta1;
    if (theta2_out) *theta2_out = t.theta2;
  });
}

}  // extern "C"
