#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symforge/report.hpp"

namespace symforge::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kIntegration = 3 };

/// Entry point shared by the symforge binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// One verification suite applied to one case.
struct SuiteRun {
  std::string suite;
  VerificationReport report;
};

/// Coprime (m, n) with k = m/n >= 1/2 and m + n <= max_sum, ordered by m + n then m.
std::vector<std::pair<int, int>> case_range(int max_sum);

/// Worker count: hardware concurrency, capped by SYMFORGE_THREADS when set.
unsigned thread_limit();

/// Runs the jobs on up to `threads` workers; results keep the job order.
std::vector<SuiteRun> run_parallel(const std::vector<std::function<SuiteRun()>>& jobs, unsigned threads);

nlohmann::ordered_json verify_json(const std::vector<SuiteRun>& runs, const std::string& target, std::uint64_t seed,
                           double alpha2);

/// Schema violations of a verify report; empty when valid.
std::vector<std::string> validate_report(const nlohmann::ordered_json& report);

/// Drops the fields that legitimately differ between identical runs
/// (timestamp, per-entry elapsed time).
nlohmann::ordered_json strip_volatile(nlohmann::ordered_json report);

}  // namespace symforge::cli
