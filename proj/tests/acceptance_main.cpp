// Acceptance suite: runs every verification criterion at its pinned tolerance
// and prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "epb/verify.hpp"

int main(int argc, char** argv) {
    epb::VerifySettings settings;
    settings.seed = 424243;
    settings.tail_seed = 424244;
    settings.threads = epb::default_threads();
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") settings.quick = true;
        if (arg == "--threads" && i + 1 < argc) settings.threads = std::atoi(argv[++i]);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = epb::run_verify_all(settings);
    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

    for (const auto& c : result.criteria)
        std::printf("[%2d/12] %s  %-55s %s\n", c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    std::printf("%s: %zu/%zu criteria passed in %.1f s\n",
                result.pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                static_cast<std::size_t>(
                    std::count_if(result.criteria.begin(), result.criteria.end(),
                                  [](const auto& c) { return c.pass; })),
                result.criteria.size(), dt / 1000.0);
    return result.pass ? 0 : 1;
}
