#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace abeltheta::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;  // worst observed deviation
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;
};

std::vector<int> all_criteria();
CriterionResult run_criterion(int id, std::uint64_t seed);

// Runs the listed criteria (all when empty) and prints one line per
// criterion to stdout.  Returns true when everything passed.
bool run_acceptance(const std::vector<int>& ids, std::uint64_t seed,
                    std::vector<CriterionResult>* results = nullptr);

} // namespace abeltheta::accept
