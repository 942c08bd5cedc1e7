#ifndef OTTO_VERIFY_HPP
#define OTTO_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace otto::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 0x07706CC1Eull;
    int instances = 1000; // randomized instances per property
    // Self-test hook: deliberately corrupt one constructed interaction
    // (offset constant omitted) so the coupling-cost check must fail.
    bool inject_fault = false;
};

// Runs every module's property/identity suite at fixed seeds.
std::vector<CheckResult> run_all(const Options& opt = {});

bool all_passed(const std::vector<CheckResult>& checks);

} // namespace otto::verify

#endif
