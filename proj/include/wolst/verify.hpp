#pragma once

// Named invariant suites run by `wolst verify` and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace wolst::verify {

using Json = nlohmann::ordered_json;

struct SuiteOutcome {
  std::string suite;
  std::uint64_t bound = 0;
  std::uint64_t checked = 0;
  std::vector<Json> violations;
  /// Suite-specific summary figures (counts, extrema).
  Json notes = Json::object();

  bool ok() const { return violations.empty(); }
};

struct SuiteInfo {
  std::string name;
  std::uint64_t default_bound;
  std::uint64_t min_bound;
  std::string description;
};

const std::vector<SuiteInfo>& suites();
const SuiteInfo* find_suite(const std::string& name);

/// Throws PreconditionViolated for unknown suites or bounds below the minimum.
SuiteOutcome run_suite(const std::string& name, std::uint64_t bound, unsigned threads = 1);

}  // namespace wolst::verify
