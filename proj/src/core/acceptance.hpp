#pragma once

#include <functional>
#include <string>
#include <vector>

namespace radbif {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int intervals = 512;  // grid size for the criteria that run "at M=512"
};

/// Runs the nine exit criteria in order. Each criterion reports instead of
/// throwing; `on_result` is called as soon as one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace radbif
