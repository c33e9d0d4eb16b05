#ifndef RADBIF_RADBIF_H
#define RADBIF_RADBIF_H

/*
 * C interface to the radial bifurcation toolkit.
 *
 * A session wraps one flat key/value configuration. Every command writes its
 * artifacts under the configured out.dir and keeps the text it would print
 * in the session until the next call (rb_session_output). Errors are
 * reported as status codes; rb_last_error() describes the most recent one
 * on the calling thread.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(RADBIF_BUILDING_LIBRARY)
#    define RADBIF_API __declspec(dllexport)
#  else
#    define RADBIF_API __declspec(dllimport)
#  endif
#else
#  define RADBIF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_NUMERICAL = 1,     /* non-convergence, collapse, failed check */
  RB_ERR_CONFIG = 2,        /* bad configuration or argument outside its domain */
  RB_ERR_INVALID_HANDLE = 3,
  RB_ERR_INTERNAL = 4
} rb_status;

typedef struct rb_session rb_session;

RADBIF_API const char* rb_version(void);
RADBIF_API const char* rb_last_error(void);

/* config_path may be NULL for the built-in defaults (reference model). */
RADBIF_API rb_status rb_session_create(const char* config_path, rb_session** out);
RADBIF_API rb_status rb_session_create_from_text(const char* config_text, rb_session** out);
RADBIF_API void rb_session_destroy(rb_session* session);

/* "key=value"; unknown keys are RB_ERR_CONFIG. */
RADBIF_API rb_status rb_session_override(rb_session* session, const char* assignment);
/* Hex digest of the canonical configuration (16 chars + NUL). */
RADBIF_API rb_status rb_session_config_hash(const rb_session* session, char* buf, size_t buf_len);
/* Text produced by the last successful command; owned by the session. */
RADBIF_API const char* rb_session_output(const rb_session* session);

RADBIF_API rb_status rb_cmd_steklov(rb_session* session, double* mu1_out);
RADBIF_API rb_status rb_cmd_report(rb_session* session);
RADBIF_API rb_status rb_cmd_solve(rb_session* session, double lambda, double init_amplitude);
RADBIF_API rb_status rb_cmd_limit(rb_session* session);
RADBIF_API rb_status rb_cmd_branch(rb_session* session, int dump_every);
RADBIF_API rb_status rb_cmd_multiplicity(rb_session* session, double lambda);
RADBIF_API rb_status rb_cmd_rescale_check(rb_session* session);
/* RB_OK only when every acceptance criterion passes. */
RADBIF_API rb_status rb_cmd_verify(rb_session* session);

/* Stateless numerics. */
RADBIF_API rb_status rb_steklov_mu1(int n_dim, double radius, int intervals, double* mu1_out);
RADBIF_API rb_status rb_steklov_shooting(int n_dim, double radius, double tol, double* mu1_out);
RADBIF_API rb_status rb_theta_exponents(double p1, double p2, double* theta1_out, double* theta2_out);

#ifdef __cplusplus
}
#endif

#endif /* RADBIF_RADBIF_H */
