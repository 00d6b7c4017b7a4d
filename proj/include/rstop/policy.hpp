#pragma once

#include <vector>

#include "rstop/thresholds.hpp"

namespace rstop {

enum class Action { a0 = 0, a1 = 1, a2 = 2 };
const char* action_name(Action a);

struct Decision {
    bool stop = false;
    Action action = Action::a2;

    static Decision go_on() { return Decision{false, Action::a2}; }
    static Decision stop_with(Action a) { return Decision{true, a}; }
};

struct StoppingPolicy {
    Problem problem;
    Thresholds th;
};

StoppingPolicy make_policy(const Problem& prob);

// Stop/continue rule at (t, z). Ties at a boundary stop; when several stop
// regions touch, committed actions win over the outside option.
Decision decide(const StoppingPolicy& policy, double t, double z);

// Worst-case reward of stopping right now: best of the two committed actions
// (graded under their adverse posteriors) and the outside option.
double immediate_payoff(double t, double z, const Payoffs& u,
                        const PriorInterval& prior, const ModelParams& p);

enum class Region { StopA0 = 0, Continue = 1, StopA2 = 2, StopA1 = 3 };
const char* region_name(Region r);

// Left-to-right layout of the z-line at a fixed time:
// regions.size() == z_breaks.size() + 1.
struct RegionReport {
    double t = 0.0;
    std::vector<double> z_breaks;
    std::vector<Region> regions;
};

RegionReport region_report(const StoppingPolicy& policy, double t);

} // namespace rstop
