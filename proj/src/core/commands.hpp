#pragma once

#include <string>

#include "core/config.hpp"

namespace radbif {

/// Runs one CLI subcommand against a configuration, writing artifacts
/// under out.dir and returning the text meant for stdout. Failures are
/// reported as Error exceptions.
class Session {
 public:
  explicit Session(RunConfig cfg) : cfg_(std::move(cfg)) {}

  RunConfig& config() noexcept { return cfg_; }
  [[nodiscard]] const RunConfig& config() const noexcept { return cfg_; }

  std::string steklov();
  std::string report();
  std::string solve(double lambda, double amplitude);
  std::string limit();
  std::string branch(int dump_every);
  std::string multiplicity(double lambda);
  std::string rescale_check();
  /// Acceptance suite at the configured grid size; sets `all_passed`.
  std::string verify(bool& all_passed);

 private:
  std::string prepare_out_dir() const;
  void require_valid_model() const;

  RunConfig cfg_;
};

}  // namespace radbif
