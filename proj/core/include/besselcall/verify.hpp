#pragma once

#include <functional>
#include <string>
#include <vector>

namespace besselcall::verify {

enum class Level { fast, full };

struct CheckResult {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

// Runs every invariant check of the library. `fast` skips the n >= 1e6
// Monte Carlo checks and uses reduced sample counts elsewhere. `seed`
// feeds the Monte Carlo configs. The callback, when given, is invoked after
// each check (for progressive reporting).
std::vector<CheckResult> run_checks(Level level, std::uint64_t seed = 42,
                                    const std::function<void(const CheckResult&)>& on_result = {});

bool all_passed(const std::vector<CheckResult>& results);

} // namespace besselcall::verify
