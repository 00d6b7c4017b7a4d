#pragma once

#include <algorithm>
#include <cmath>

namespace rstop {

// Probabilities are kept inside [PROB_EPS, 1 - PROB_EPS] before any log-odds
// map so the transforms below stay finite.
inline constexpr double PROB_EPS = 1e-12;

inline double clamp_prob(double r) {
    return std::clamp(r, PROB_EPS, 1.0 - PROB_EPS);
}

inline double logit(double r) {
    r = clamp_prob(r);
    return std::log(r / (1.0 - r));
}

inline double expit(double x) {
    // evaluate from the side that avoids overflow
    if (x >= 0.0) {
        double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// Signal model: dZ_t = theta dt + sigma dB_t, theta in {theta0, theta1},
// observation cost c per unit time.
struct ModelParams {
    double theta0 = 0.0;
    double theta1 = 1.0;
    double sigma = 1.0;
    double c = 1.0;

    static ModelParams make(double theta0, double theta1, double sigma, double c);

    double drift_gap() const { return theta1 - theta0; }
    // signal-to-noise scale of the likelihood-ratio process
    double kappa() const { return drift_gap() / (sigma * sigma); }
    double lambda() const {
        return (theta1 * theta1 - theta0 * theta0) / (2.0 * sigma * sigma);
    }
    // normalized observation cost driving every threshold equation
    double c_hat() const {
        double d = drift_gap();
        return 2.0 * c * sigma * sigma / (d * d);
    }
    double drift_given(double m) const { return theta0 + drift_gap() * m; }
};

// Set of priors on {theta = theta1}: every m0 in [m_lo, m_hi].
struct PriorInterval {
    double m_lo = 0.5;
    double m_hi = 0.5;

    static PriorInterval make(double m_lo, double m_hi);
    bool singleton() const { return m_lo == m_hi; }
    // gap between the log-odds of the endpoint priors; invariant over time
    double logit_gap() const { return logit(m_hi) - logit(m_lo); }
};

// Terminal rewards: u(ai, thetaj) = u_ij for the committed actions and a flat
// u2 for the outside option.
struct Payoffs {
    double u00 = 1.0;
    double u01 = 0.0;
    double u10 = 0.0;
    double u11 = 1.0;
    double u2 = 0.0;

    static Payoffs make(double u00, double u01, double u10, double u11, double u2);

    bool symmetric() const { return u00 == u11 && u01 == u10; }
    bool no_risky_option() const { return u2 <= std::min(u01, u10); }
    // worst-case expected reward of stopping with a0 / a1 at posteriors
    // (m_hi, m_lo); a0 is graded under the upper posterior, a1 under the lower
    double worst_a0(double m_hi) const { return (u00 - u01) * (1.0 - m_hi) + u01; }
    double worst_a1(double m_lo) const { return (u11 - u10) * m_lo + u10; }
};

struct Problem {
    ModelParams model;
    PriorInterval prior;
    Payoffs payoffs;
};

// ---------- posterior statistics ----------

// likelihood ratio dP1/dP0 restricted to F_t, evaluated at Z_t = z
double likelihood_ratio(double t, double z, const ModelParams& p);

// posterior P(theta = theta1 | Z_t = z) started from prior m0
double posterior(double m0, double t, double z, const ModelParams& p);

// extreme posteriors generated by the prior interval at (t, z)
struct PosteriorPair {
    double m_lo_t = 0.0;
    double m_hi_t = 0.0;
};
PosteriorPair posterior_pair(const PriorInterval& prior, double t, double z,
                             const ModelParams& p);

// Signal level at which the upper (resp. lower) posterior equals r. Linear in
// t with common slope (theta0 + theta1)/2.
double z_of_posterior_hi(double r, double t, const PriorInterval& prior,
                         const ModelParams& p);
double z_of_posterior_lo(double r, double t, const PriorInterval& prior,
                         const ModelParams& p);
struct BoundaryZ {
    double z_hi = 0.0;  // where the upper posterior hits r
    double z_lo = 0.0;  // where the lower posterior hits r
};
BoundaryZ boundary_maps(double r, double t, const PriorInterval& prior,
                        const ModelParams& p);
// decomposition z = slope * t + intercept(r) used by hot loops
double boundary_slope(const ModelParams& p);
double boundary_intercept_hi(double r, const PriorInterval& prior,
                             const ModelParams& p);
double boundary_intercept_lo(double r, const PriorInterval& prior,
                             const ModelParams& p);

// ---------- indifference between the committed actions ----------

// Posterior pair (pi_lo, pi_hi) at which the worst-case rewards of a0 and a1
// coincide; the anchor of the switching trajectory in z-space.
struct IndifferencePoint {
    double pi_lo = 0.5;
    double pi_hi = 0.5;
};
IndifferencePoint indifference(const PriorInterval& prior, const Payoffs& u);

// z-location of the indifference trajectory at time t
double z_tilde(const IndifferencePoint& ind, double t, const PriorInterval& prior,
               const ModelParams& p);

// Drift of the signal under the adversarial measure: the upper posterior's
// predictive drift left of the switching trajectory, the lower one's right of
// it (ties go right).
double worst_case_drift(const Problem& prob, const IndifferencePoint& ind,
                        double t, double z);

// ---------- threshold transforms ----------
// l and l_tilde are strictly increasing bijections of (0,1) onto R; l_hat is
// their convex antiderivative companion (d/dr l_hat = l, d/dr l = l_prime).
// Every stopping-threshold condition reduces to algebra in these three.

double l(double r);        // 2 log(r/(1-r)) - 1/r + 1/(1-r)
double l_tilde(double r);  // log(r/(1-r)) + r/(1-r)
double l_hat(double r);    // (2r - 1) log(r/(1-r))
double l_prime(double r);  // 1 / (r^2 (1-r)^2)

// unique r in (0,1) with l(r) = target
double invert_l(double target);

// Same transforms in log-odds coordinates x = logit(r), where they stay exact
// far beyond the probability clamp: l = 2(x + sinh x), l_tilde = x + e^x,
// l_hat = x tanh(x/2). The solvers work here.
namespace logodds {
double l(double x);
double l_tilde(double x);
double l_hat(double x);
double invert_l(double target);  // returns the log-odds of the root
} // namespace logodds

} // namespace rstop
