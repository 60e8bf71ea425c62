#pragma once

// Fast built-in oracle and property checks (the `selftest` subcommand).

#include <cstdint>
#include <string>
#include <vector>

namespace lgg {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_selftest(std::uint64_t seed = 20240601);

}  // namespace lgg
