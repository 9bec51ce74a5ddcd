#pragma once

#include "bnls/lattice_linear.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bnls {

enum class AcceptanceLevel { quick, full };

[[nodiscard]] AcceptanceLevel acceptance_level_from_string(const std::string& s);  // throws ConfigError

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against thresholds
  double seconds = 0.0;
};

struct AcceptanceOptions {
  AcceptanceLevel level = AcceptanceLevel::quick;
  unsigned workers = 1;
  std::uint64_t seed = 20240601;
  std::vector<int> only;  // empty runs all criteria
  // Test hook: applied to every kernel table the kernel oracle criterion builds.
  std::function<void(KernelTable&)> kernel_hook;
  // Scratch space for the determinism criterion; a temporary directory if empty.
  std::string scratch_dir;
};

[[nodiscard]] const std::vector<std::string>& criterion_names();  // index id - 1

// Runs the selected criteria in id order. Exceptions inside a criterion turn
// into a failed entry.
[[nodiscard]] std::vector<CriterionResult> acceptance_suite(const AcceptanceOptions& options,
                                                            const std::function<void(const CriterionResult&)>& on_result = {});

[[nodiscard]] std::string format_result_line(const CriterionResult& r);
[[nodiscard]] std::string acceptance_report_json(const std::vector<CriterionResult>& results, AcceptanceLevel level);

} // namespace bnls
