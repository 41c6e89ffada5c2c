#pragma once

#include <string>
#include <vector>

namespace asepqh {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the ten-part acceptance suite. The quick level trims grid sizes and
// simulation lengths; the full level runs everything at contract strength.
std::vector<CriterionResult> run_acceptance(bool full);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace asepqh
