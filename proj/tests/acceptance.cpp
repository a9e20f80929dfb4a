// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run directly or through ctest.
#include <chrono>
#include <cstdio>

#include "macbounds/verify.hpp"

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = macbounds::run_all_checks();
    const bool ok = macbounds::report(results);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("acceptance suite runtime: %.1f s\n", elapsed);
    return ok ? 0 : 1;
}
