#pragma once

#include <cmath>
#include <string>

#include "rstop/errors.hpp"

namespace rstop {

struct RootOptions {
    double x_tol = 1e-12;   // absolute tolerance on the argument
    double f_tol = 1e-10;   // residual tolerance
    int max_iter = 200;
};

// Root of a continuous, strictly monotone f on [lo, hi] by bisection.
// Requires a sign change over the bracket.
template <typename F>
double bisect(F&& f, double lo, double hi, const RootOptions& opt = {},
              const char* label = "bisect") {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw solver_error(std::string(label) + ": no sign change over bracket");
    for (int it = 0; it < opt.max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0 || std::abs(fm) <= opt.f_tol) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if ((hi - lo) <= opt.x_tol) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

// Newton iteration safeguarded by a shrinking bisection bracket. Falls back to
// the bracket midpoint whenever the Newton step leaves the bracket or the
// derivative degenerates. f must be strictly monotone on [lo, hi].
template <typename F, typename DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi,
                     const RootOptions& opt = {},
                     const char* label = "newton") {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw solver_error(std::string(label) + ": no sign change over bracket");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iter; ++it) {
        double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if ((hi - lo) <= opt.x_tol) return 0.5 * (lo + hi);
        double d = df(x);
        double xn = (d != 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x) return x;  // stalled at floating-point resolution
        if (std::abs(xn - x) <= opt.x_tol && std::abs(fx) <= opt.f_tol) return xn;
        x = xn;
    }
    throw solver_error(std::string(label) + ": no convergence after " +
                       std::to_string(opt.max_iter) + " iterations");
}

} // namespace rstop
