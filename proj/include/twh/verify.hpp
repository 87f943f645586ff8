#pragma once

#include <string>
#include <vector>

namespace twh {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

std::vector<std::string> suite_names();

// Runs "anchors", "identities", "kernels" or "all". Throws InputError for other names.
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace twh
