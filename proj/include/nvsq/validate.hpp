#pragma once

#include <string>
#include <vector>

namespace nvsq {

struct ValidationFamily {
    std::string name;
    bool passed;
    double max_error;
    double tolerance;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationFamily> families;
    bool all_passed() const;
    std::string to_json() const;
    std::string to_text() const;
};

struct ValidationOptions {
    // "quick": closed-form cross checks. "full": adds the Fock-space oracles.
    std::string level = "quick";
    // fault injection for negative controls: adds `fault` to one closed-form
    // spin element inside the named family before comparison
    std::string fault_family;
    double fault = 0.0;
    unsigned seed = 20240811;
};

ValidationReport run_validation(const ValidationOptions& opt = {});

} // namespace nvsq
