#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isowalk {

struct SelfCheckResult {
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;  // "check-name: what went wrong"
};

// Reduced-size property suite covering every module; finishes well under a
// minute. Each check is independent, so one failure does not mask the rest.
SelfCheckResult run_selfcheck(std::uint64_t seed);

}  // namespace isowalk
