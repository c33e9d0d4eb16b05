#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "radbif/radbif.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

rb_session* make_session(const fs::path& out) {
  rb_session* s = nullptr;
  const std::string text = "out.dir = " + out.string() + "\n";
  REQUIRE(rb_session_create_from_text(text.c_str(), &s) == RB_OK);
  REQUIRE(s != nullptr);
  return s;
}

}  // namespace

TEST_CASE("stateless numerics") {
  double mu = 0.0;
  REQUIRE(rb_steklov_mu1(3, 1.0, 2048, &mu) == RB_OK);
  CHECK(std::abs(mu - 0.31303528549933135) <= 1e-6);
  REQUIRE(rb_steklov_shooting(3, 1.0, 1e-10, &mu) == RB_OK);
  CHECK(std::abs(mu - 0.31303528549933135) <= 1e-8);
  double t1 = 0, t2 = 0;
  REQUIRE(rb_theta_exponents(2.0, 3.0, &t1, &t2) == RB_OK);
  CHECK(t1 == doctest::Approx(0.8));
  CHECK(t2 == doctest::Approx(0.6));
  CHECK(rb_theta_exponents(1.0, 1.0, &t1, &t2) == RB_ERR_CONFIG);
  CHECK(std::string(rb_last_error()).find("theta") != std::string::npos);
  CHECK(rb_steklov_mu1(3, 1.0, 8, &mu) == RB_ERR_CONFIG);
}

TEST_CASE("handle errors") {
  CHECK(rb_cmd_report(nullptr) == RB_ERR_INVALID_HANDLE);
  CHECK(rb_session_create(nullptr, nullptr) == RB_ERR_INVALID_HANDLE);
  rb_session* s = nullptr;
  CHECK(rb_session_create("/nonexistent/config.cfg", &s) == RB_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(rb_session_output(nullptr)).empty());
  rb_session_destroy(nullptr);
}

TEST_CASE("overrides and hash") {
  TempDir dir("radbif_capi_hash");
  rb_session* s = make_session(dir.path);
  char before[32], after[32];
  REQUIRE(rb_session_config_hash(s, before, sizeof before) == RB_OK);
  CHECK(rb_session_override(s, "grid.M=256") == RB_OK);
  REQUIRE(rb_session_config_hash(s, after, sizeof after) == RB_OK);
  CHECK(std::string(before) != std::string(after));
  CHECK(rb_session_override(s, "grid.Z=1") == RB_ERR_CONFIG);
  char tiny[4];
  CHECK(rb_session_config_hash(s, tiny, sizeof tiny) == RB_ERR_CONFIG);
  rb_session_destroy(s);
}

TEST_CASE("steklov and solve commands write artifacts") {
  TempDir dir("radbif_capi_cmds");
  rb_session* s = make_session(dir.path);
  double mu = 0.0;
  REQUIRE(rb_cmd_steklov(s, &mu) == RB_OK);
  CHECK(std::string(rb_session_output(s)) == "mu1=0.3130349\n");
  CHECK(fs::exists(dir.path / "phi1.csv"));

  REQUIRE(rb_cmd_solve(s, 0.32, 1.0) == RB_OK);
  std::ifstream in(dir.path / "solve.jsonl");
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto rec = nlohmann::json::parse(line);
  CHECK(rec.contains("config_hash"));
  CHECK(rec["residual"].get<double>() <= 1e-10);
  CHECK(rec["lambda"].get<double>() == 0.32);

  CHECK(rb_cmd_solve(s, -1.0, 1.0) == RB_ERR_CONFIG);
  CHECK(rb_cmd_multiplicity(s, 0.1) == RB_ERR_CONFIG);
  rb_session_destroy(s);
}

TEST_CASE("branch output is deterministic") {
  TempDir dir("radbif_capi_branch");
  auto read_all = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::string first;
  for (int run = 0; run < 2; ++run) {
    rb_session* s = make_session(dir.path);
    REQUIRE(rb_session_override(s, "grid.M=128") == RB_OK);
    REQUIRE(rb_cmd_branch(s, 50) == RB_OK);
    const auto text = read_all(dir.path / "branch.jsonl");
    if (run == 0) first = text;
    else CHECK(text == first);
    rb_session_destroy(s);
  }
  CHECK(fs::exists(dir.path / "branch.dat"));
  CHECK(fs::exists(dir.path / "states" / "point_00000.csv"));
  std::istringstream lines(first);
  std::string line;
  while (std::getline(lines, line)) {
    const auto rec = nlohmann::json::parse(line);
    for (const char* key : {"lambda", "norm_u1", "norm_u2", "norm_pair", "ds", "tangent_sign", "config_hash"})
      CHECK(rec.contains(key));
  }
}

TEST_CASE("numerical failure maps to status 1") {
  TempDir dir("radbif_capi_fail");
  rb_session* s = make_session(dir.path);
  REQUIRE(rb_session_override(s, "newton.max_iter=1") == RB_OK);
  CHECK(rb_cmd_limit(s) == RB_ERR_NUMERICAL);
  CHECK(std::string(rb_last_error()).size() > 0);
  rb_session_destroy(s);
}
