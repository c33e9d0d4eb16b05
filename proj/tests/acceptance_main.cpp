#include <cstdio>
#include <cstdlib>
#include <string>

#include "core/acceptance.hpp"

int main(int argc, char** argv) {
  radbif::AcceptanceOptions opts;
  if (argc > 1) opts.intervals = std::atoi(argv[1]);
  int failed = 0;
  radbif::run_acceptance(opts, [&](const radbif::CriterionResult& r) {
    std::printf("%s\n", radbif::format_result_line(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%s\n", failed == 0 ? "acceptance: all criteria PASS" : "acceptance: FAILURES present");
  return failed == 0 ? 0 : 1;
}
