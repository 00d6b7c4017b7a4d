#pragma once

#include <string>

#include "rstop/simulation.hpp"
#include "rstop/thresholds.hpp"

namespace rstop {

// fixed-width numeric formatting used across every artifact (12 significant
// digits), and the value actually carried by such output
std::string fmt12(double x);
double round12(double x);

enum class Family { Ellsberg, Test, General };
const char* family_name(Family f);

// A scenario file fully determines a problem instance plus the simulation
// setup. Families:
//   ellsberg: symmetric two-urn experiment (alpha, eps, c, sigma)
//   test:     drifts {0, beta}, symmetric-stake payoffs a+b / b / a / a+b
//             with a dominated outside option, prior interval [m_lo, m_hi]
//   general:  every field spelled out
struct Scenario {
    Family family = Family::Ellsberg;

    // ellsberg
    double alpha = 0.125;
    double eps = 0.0;

    // test
    double beta = 1.0;
    double a = 1.0;
    double b = 1.0;

    // shared / general
    double c = 0.01;
    double sigma = 1.0;
    double m_lo = 0.5;
    double m_hi = 0.5;
    double theta0 = 0.0;
    double theta1 = 1.0;
    double u00 = 1.0, u01 = 0.0, u10 = 0.0, u11 = 1.0, u2 = 0.0;

    SimConfig sim;

    Problem problem() const;
    bool is_ellsberg() const { return family == Family::Ellsberg; }
    EllsbergParams ellsberg() const;  // valid only for the ellsberg family
};

// Strict parser for the scenario format: [problem] / [sim] sections,
// key = value lines, # comments. Unknown sections, unknown keys, type
// mismatches, missing required keys, and out-of-domain values all raise
// scenario_error.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical form: fixed section and key order, numbers through fmt12.
// Serializing a parsed scenario reproduces the canonical bytes exactly.
std::string serialize_scenario(const Scenario& s);

} // namespace rstop
