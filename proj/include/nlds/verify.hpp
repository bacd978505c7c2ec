#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nlds {

enum class CheckStatus { Pass, Fail, Skip };
std::string to_string(CheckStatus s);

struct CheckResult {
    int criterion = 0;  // acceptance item this check belongs to
    std::string name;
    std::string tag;  // property being verified
    std::vector<std::string> labels;  // e.g. "2d", "random", "slow"
    CheckStatus status = CheckStatus::Skip;
    std::vector<std::pair<std::string, double>> measured;
    double tolerance = 0.0;
    double runtime = 0.0;  // seconds; reported, never written to the CSV
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    int count(CheckStatus s) const;
    bool all_pass() const { return count(CheckStatus::Fail) == 0; }
    /// name,criterion,tag,status,measured,tolerance (no runtimes, so reruns compare byte for byte).
    std::string csv() const;
    std::string text() const;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    /// Check names, tags, labels or criterion ids ("7") to skip.
    std::vector<std::string> skip;
    /// Multiplies every tolerance; 0 forces failures.
    double tolerance_scale = 1.0;
    int workers = 1;
    /// Run only these check names (empty: all).
    std::vector<std::string> only;
};

struct CheckInfo {
    int criterion;
    std::string name;
    std::string tag;
    std::vector<std::string> labels;
};

std::vector<CheckInfo> list_checks();

VerificationReport verify_suite(const VerifyOptions& options = {});

}  // namespace nlds
