// Runs every acceptance criterion and prints one PASS/FAIL line each.

#include <cstdio>

#include "sqm/scenarios.hpp"

int main() {
    int failures = 0;
    for (const auto& r : sqm::scenarios::run_all()) {
        const bool in_budget = r.seconds <= r.budget_seconds;
        const bool ok = r.passed && in_budget;
        failures += ok ? 0 : 1;
        std::printf("%s criterion %d: %s (%.2fs of %.0fs)%s\n  %s\n", ok ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds, r.budget_seconds, in_budget ? "" : " over budget", r.detail.c_str());
    }
    std::printf("%d of %d criteria passed\n", sqm::scenarios::kCriterionCount - failures, sqm::scenarios::kCriterionCount);
    return failures == 0 ? 0 : 1;
}
