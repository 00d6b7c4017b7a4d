#pragma once

#include <string>
#include <vector>

#include "rstop/thresholds.hpp"

namespace rstop {

// Closed-form robust value of the stopping problem. Continuation pieces have
// the form c_hat * l_hat(y) + a y + b in the posterior chart y that rules the
// relevant side of the switching trajectory (upper posterior to its left,
// lower posterior to its right); stopping pieces are the worst-case rewards.
struct ValueFunction {
    Problem problem;
    Thresholds th;
    // left continuation piece, argument y = upper posterior
    double a_left = 0.0;
    double b_left = 0.0;
    // right continuation piece, argument y = lower posterior
    double a_right = 0.0;
    double b_right = 0.0;
};

ValueFunction build_value_function(const Problem& prob);
ValueFunction build_value_function(const Problem& prob, const Thresholds& th);

double evaluate(const ValueFunction& vf, double t, double z);

// One z-breakpoint of the region layout at a fixed time, with the boundary
// diagnostics used by the smooth-contact check.
struct ContactCheck {
    double z = 0.0;
    std::string where;        // which boundary this is
    double value_gap = 0.0;   // jump of v across the breakpoint
    double slope_gap = 0.0;   // jump of the first derivative (see below)
    bool pass = false;
};

struct SmoothContactReport {
    double t = 0.0;
    double tol = 0.0;
    std::vector<ContactCheck> checks;
    bool ok() const;
    std::vector<ContactCheck> violations() const;
};

// Verifies value continuity and first-order contact at every breakpoint of
// the time-t slice by one-sided finite differences; collects violations
// instead of throwing.
//
// At a stopping boundary both sides live in the same posterior chart, so the
// derivatives compared are plain dv/dz. At the measure-switch trajectory the
// construction equates the derivatives taken in each side's own posterior
// coordinate (upper posterior on the left, lower on the right); the check
// compares those chart derivatives, i.e. dv/dz divided by the side's dm/dz.
// When the two posteriors are not mirror images of each other the chart
// scales differ and dv/dz itself genuinely jumps there by design.
SmoothContactReport check_smooth_contact(const ValueFunction& vf, double t,
                                         double tol = 1e-6);

// Residual of the continuation equation
//   -c + v_t + (sigma^2/2) v_zz + f(t,z) v_z
// at (t, z), with f the worst-case drift. Finite-difference based; raises
// region_error when (t, z) lies in a stopping region. Accuracy degrades
// within ~1e-3 of a region boundary as the stencil shrinks to fit.
double hjb_residual(const ValueFunction& vf, double t, double z);

} // namespace rstop
