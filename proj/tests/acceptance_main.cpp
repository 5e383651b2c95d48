// Acceptance suite runner: one PASS/FAIL line per criterion, nonzero exit
// when anything fails. Wired into ctest and exposed as `gengeo acceptance`.
#include <cstdio>

#include "gengeo/acceptance.hpp"

int main() {
    const auto results = gengeo::run_acceptance_suite();
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%2d/11] %s  %-48s (%.1f s)%s%s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.seconds, r.detail.empty() ? "" : "  -- ",
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    if (failures) {
        std::printf("%d of %zu criteria failed\n", failures, results.size());
        return 3;
    }
    std::printf("all %zu criteria passed\n", results.size());
    return 0;
}
