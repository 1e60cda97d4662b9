// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit status is nonzero when any fails.

#include "densgeo/criteria.hpp"

#include <chrono>
#include <cstdio>
#include <exception>

int main() {
    bool all_ok = true;
    for (const auto& crit : densgeo::accept::all_criteria()) {
        auto t0 = std::chrono::steady_clock::now();
        densgeo::accept::criterion_result res;
        bool threw = false;
        std::string what;
        try {
            res = crit.run();
        } catch (const std::exception& e) {
            threw = true;
            what = e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();
        bool ok = !threw && res.pass;
        std::printf("%s criterion %2d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", crit.id,
                    crit.name.c_str(), secs);
        if (threw) {
            std::printf("       exception: %s\n", what.c_str());
        } else {
            for (const auto& c : res.checks)
                std::printf("       %-32s value=%.6e bound=%.6e %s\n", c.name.c_str(), c.value,
                            c.bound, c.pass ? "ok" : "FAIL");
        }
        all_ok = all_ok && ok;
    }
    std::printf("%s\n", all_ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return all_ok ? 0 : 1;
}
