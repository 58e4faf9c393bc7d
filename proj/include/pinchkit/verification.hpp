#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinchkit::verify {

// ==== whole-toolkit verification suite ====
//
// Ten self-contained criteria exercising the exact identities, the
// random pinched sweep, the optimizer oracles, and end-to-end
// classification. Each criterion is deterministic in (seed) alone; the
// worker count changes scheduling but never a byte of the report text.

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic; carries no timings or worker counts
};

inline constexpr int CRITERION_COUNT = 10;

// run one criterion (1-based id); never throws, failures are reported
CriterionResult run_criterion(int id, std::uint64_t seed, int workers);

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  bool all_passed = false;
  std::string text;
};

VerifyReport verify_paper(std::uint64_t seed, int workers);

std::string render_report(const VerifyReport& report);

}  // namespace pinchkit::verify
