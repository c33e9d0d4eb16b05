#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/continuation.hpp"
#include "core/grid.hpp"
#include "core/model.hpp"
#include "core/solver.hpp"

namespace radbif {

/// Flat `key = value` configuration. Lines starting with '#' are comments.
/// Unknown keys are Config errors.
class RunConfig {
 public:
  static const std::vector<std::string>& valid_keys();

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  /// `key=value`; Config error on unknown key or missing '='.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] NonlinearityModel model() const;
  [[nodiscard]] RadialGrid grid() const;
  [[nodiscard]] NewtonConfig newton() const;
  [[nodiscard]] ContinuationConfig continuation() const;
  [[nodiscard]] std::string out_dir() const;

  /// FNV-1a over the canonical (sorted, defaults included) key=value text;
  /// out.dir does not take part.
  [[nodiscard]] std::string hash() const;
  [[nodiscard]] std::string canonical_text() const;
  [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  RunConfig();
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] int integer(const std::string& key) const;
  [[nodiscard]] bool has(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

std::vector<double> parse_number_list(const std::string& text);

}  // namespace radbif
