#pragma once
// Acceptance campaign: each shipping criterion as a named check with a
// measured error and tolerance, runnable in full or quick mode.

#include <cstdint>
#include <string>
#include <vector>

namespace rabi {

struct CheckResult {
    std::string name;
    bool pass{false};
    double measured{0.0};   // worst observed deviation (criterion-specific)
    double tolerance{0.0};
    std::string detail;     // human-readable summary of what was measured
};

struct VerifyConfig {
    bool quick{false};
    std::uint64_t seed{1};
};

// Runs all checks in criterion order; never throws for a failing criterion
// (a check that raises records the exception text and fails).
std::vector<CheckResult> run_verification(const VerifyConfig& cfg);

bool all_passed(const std::vector<CheckResult>& checks);

/// JSON report: {schema, quick, seed, all_pass, checks:[{check, status,
// measured, tolerance, detail}]}.
std::string verification_json(const std::vector<CheckResult>& checks, const VerifyConfig& cfg);

}  // namespace rabi
