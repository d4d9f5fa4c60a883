#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sqm::scenarios {

/// A stored failure witness, replayable on its own.
struct ReplayItem {
    int criterion = 0;
    std::string label;
    std::function<bool()> replay;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    /// Wall-clock budget the criterion is expected to meet.
    double budget_seconds = 0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

inline constexpr int kCriterionCount = 10;

/// Runs one criterion. Criteria 2-7 append their witnesses to `log`; criterion 10 replays
/// whatever `log` holds (running 2-7 first when it is empty).
CriterionResult run_criterion(int id, std::vector<ReplayItem>& log, const AcceptanceOptions& opts = {});

/// Criteria 1-10 in order, sharing one witness log.
std::vector<CriterionResult> run_all(const AcceptanceOptions& opts = {});

}  // namespace sqm::scenarios
