#pragma once

// Property batteries behind `tms check --suite NAME`.

#include <cstdint>
#include <string>
#include <vector>

namespace tms {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured maximal deviation (or observed order)
  double threshold = 0.0;  // pass bound; for ranges, see lower/upper
  bool passed = false;
  std::string detail;
};

/// "identities", "nullforms", "commutators" or "expansion"; ValidationError otherwise.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

std::vector<std::string> suite_names();

}  // namespace tms
