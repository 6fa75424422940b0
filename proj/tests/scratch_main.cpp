// Temporary exploration harness (removed before finalizing).
#include <cstdio>
#include "core/validation.hpp"

int main() {
    const auto results = pipeleak::validation::run_all_checks();
    int failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        printf("[%s] %s\n        %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
               r.detail.c_str());
    }
    printf("%d failed\n", failed);
    return failed != 0;
}
