#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bto {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the acceptance criteria (all, or the listed subset). quick trims
// each criterion to p = 2 and small radii. Criterion 12 is the timing
// budget over the other eleven.
std::vector<CriterionResult> run_acceptance(bool quick, std::uint64_t seed,
                                            const std::vector<int>& only = {});

} // namespace bto
