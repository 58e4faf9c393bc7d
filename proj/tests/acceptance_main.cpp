// Acceptance gate: one line per criterion, wall-clock checked against the
// published per-criterion budgets, exit 0 only when every line passes.

#include <array>
#include <chrono>
#include <cstdio>
#include <string>

#include "pinchkit/verification.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  constexpr std::uint64_t seed = 42;
  constexpr int workers = 8;
  // budgets in seconds for criteria 1..9; 10 is the determinism double-run
  constexpr std::array<double, 9> budget = {1, 5, 10, 5, 60, 30, 60, 1, 10};

  bool all_passed = true;
  for (int id = 1; id <= 9; ++id) {
    const auto start = std::chrono::steady_clock::now();
    const auto res = pinchkit::verify::run_criterion(id, seed, workers);
    const double elapsed = seconds_since(start);
    const bool in_budget = elapsed < budget[static_cast<std::size_t>(id - 1)];
    const bool ok = res.passed && in_budget;
    all_passed = all_passed && ok;
    std::printf("criterion %2d: %s  (%6.2fs, budget %3.0fs)  %s%s\n", id,
                ok ? "PASS" : "FAIL", elapsed, budget[static_cast<std::size_t>(id - 1)],
                res.name.c_str(), in_budget ? "" : "  [over budget]");
    if (!res.passed) std::printf("              %s\n", res.detail.c_str());
  }

  // criterion 10: the full verification report is byte-identical at 1 and 8
  // workers, and both runs pass
  const auto start = std::chrono::steady_clock::now();
  const auto serial = pinchkit::verify::verify_paper(seed, 1);
  const auto wide = pinchkit::verify::verify_paper(seed, workers);
  const double elapsed = seconds_since(start);
  const bool identical = serial.text == wide.text;
  const bool ok10 = identical && serial.all_passed && wide.all_passed;
  all_passed = all_passed && ok10;
  std::printf("criterion 10: %s  (%6.2fs)  report determinism across workers", ok10 ? "PASS" : "FAIL",
              elapsed);
  if (!identical)
    std::printf("  [reports differ: %zu vs %zu bytes]", serial.text.size(), wide.text.size());
  else
    std::printf("  [%zu bytes, workers 1 == %d]", serial.text.size(), workers);
  std::printf("\n");

  std::printf("acceptance: %s\n", all_passed ? "PASS (10/10)" : "FAIL");
  return all_passed ? 0 : 1;
}
