#pragma once

#include <stdexcept>
#include <string>

namespace rstop {

// Solver-side failure: wrong case branch, no solution in range, or an
// iteration that did not converge. Carries a human-readable reason.
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

// Query made outside the region where the quantity is defined
// (e.g. a continuation-equation residual requested in a stopping region).
struct region_error : std::runtime_error {
    explicit region_error(const std::string& what) : std::runtime_error(what) {}
};

// Scenario file problems: syntax, unknown keys, missing or invalid fields.
struct scenario_error : std::runtime_error {
    explicit scenario_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rstop
