#pragma once

#include <map>
#include <string>
#include <string_view>

namespace ssk {

enum class MgfMethod { ContourExact, ClosedForm, MonteCarlo };

std::string_view to_string(MgfMethod m);

struct MgfResult {
    double value = 1.0;
    MgfMethod method = MgfMethod::ContourExact;
    double abs_error_estimate = 0.0;
    std::map<std::string, double> diagnostics;
};

}  // namespace ssk
